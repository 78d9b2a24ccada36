from abc import ABC, abstractmethod
from typing import Any, Dict, List, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from src.utils.errors import WindowOverflowError
from src.walker.states import PositionWindow, WalkerDensityMatrix


class BaseChannel(ABC):
    """Base class for one step of the walk followed by a noise process."""

    name = "base"
    # Sites that must stay empty at each window edge before a step
    margin = 1

    def __init__(self, p: float = 0.0):
        """
        Initialize the channel.

        Args:
            p: Noise probability in [0, 1]
        """
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"Noise probability must lie in [0, 1], got {p}")
        self.p = p

    def _check_margin(self, tensor: NDArray[np.complex128], n_sites: int) -> None:
        """
        Raise if any amplitude sits within ``margin`` sites of the window edge.

        Args:
            tensor: Array whose leading axis (and third axis for a density
                tensor) indexes position
            n_sites: Number of sites in the window
        """
        m = self.margin
        if n_sites <= 2 * m:
            raise WindowOverflowError(f"Window of {n_sites} sites cannot take another {self.name} step")

        edges = [tensor[:m], tensor[-m:]]
        if tensor.ndim == 4:
            edges += [tensor[:, :, :m], tensor[:, :, -m:]]
        if any(np.any(edge) for edge in edges):
            raise WindowOverflowError(
                f"Support within {m} site(s) of the window edge; a {self.name} step would leave the window"
            )

    def step(self, rho: WalkerDensityMatrix) -> WalkerDensityMatrix:
        """
        Apply one channel step.

        Args:
            rho: Current state

        Returns:
            WalkerDensityMatrix: New state on the same window

        Raises:
            WindowOverflowError: if the support would leave the window
        """
        tensor = rho.tensor
        self._check_margin(tensor, rho.window.n_sites)
        return WalkerDensityMatrix.from_tensor(self._apply(tensor), rho.window)

    @abstractmethod
    def _apply(self, tensor: NDArray[np.complex128]) -> NDArray[np.complex128]:
        """
        Structural action of the channel on the (x, c, y, d) tensor.

        Args:
            tensor: Density tensor already checked against the margin

        Returns:
            NDArray[np.complex128]: Output tensor of the same shape
        """
        pass

    @abstractmethod
    def weighted_operators(self, window: PositionWindow) -> List[Tuple[float, sparse.spmatrix]]:
        """
        Kraus operators as (weight, operator) pairs, E_n = sqrt(weight) * operator.

        Args:
            window: Window to build the operators on

        Returns:
            List[Tuple[float, sparse.spmatrix]]: Weighted operators
        """
        pass

    def kraus_operators(self, window: PositionWindow) -> List[sparse.csr_matrix]:
        """Kraus set on ``window``; zero-weight terms are left out."""
        return [
            sparse.csr_matrix(np.sqrt(weight) * op)
            for weight, op in self.weighted_operators(window)
            if weight > 0.0
        ]

    def describe(self) -> Dict[str, Any]:
        return {"noise": self.name, "p": self.p}

    def __repr__(self) -> str:
        return f"{type(self).__name__}(p={self.p})"
