from typing import List, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from src.walker.channels.base_channel import BaseChannel
from src.walker.operators import walk_unitary
from src.walker.states import CoinConvention, PositionWindow, PureWalkerState, WalkerDensityMatrix


class CoherentChannel(BaseChannel):
    """Noise-free Hadamard walk step rho -> U_w rho U_w^dagger."""

    name = "none"

    def _coherent(self, tensor: NDArray[np.complex128]) -> NDArray[np.complex128]:
        hadamard = CoinConvention.HADAMARD
        coined = np.einsum("ab,xbyd,cd->xayc", hadamard, tensor, hadamard.conj(), optimize=True)

        # Edge sites are empty, so the cyclic roll is an exact shift
        shifted = np.empty_like(coined)
        for c, sc in enumerate(CoinConvention.SHIFTS):
            for d, sd in enumerate(CoinConvention.SHIFTS):
                shifted[:, c, :, d] = np.roll(coined[:, c, :, d], (sc, sd), axis=(0, 1))
        return shifted

    def _apply(self, tensor: NDArray[np.complex128]) -> NDArray[np.complex128]:
        return self._coherent(tensor)

    def weighted_operators(self, window: PositionWindow) -> List[Tuple[float, sparse.spmatrix]]:
        return [(1.0, walk_unitary(window))]

    def step_pure(self, state: PureWalkerState) -> PureWalkerState:
        """
        One coherent step of an amplitude vector.

        Args:
            state: Current pure state

        Returns:
            PureWalkerState: Coin-then-shift applied
        """
        self._check_margin(state.amplitudes, state.window.n_sites)
        coined = state.amplitudes @ CoinConvention.HADAMARD.T

        shifted = np.empty_like(coined)
        for c, sc in enumerate(CoinConvention.SHIFTS):
            shifted[:, c] = np.roll(coined[:, c], sc)
        return PureWalkerState(shifted, state.window)


_COHERENT = CoherentChannel()


def coherent_step_pure(state: PureWalkerState) -> PureWalkerState:
    """Apply one Hadamard-walk step to a pure state."""
    return _COHERENT.step_pure(state)


def coherent_step_density(rho: WalkerDensityMatrix) -> WalkerDensityMatrix:
    """Apply one Hadamard-walk step to a density matrix."""
    return _COHERENT.step(rho)
