"""
Position distribution and the scalar observables derived from it.
"""

from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional

import numpy as np
from numpy.typing import NDArray

import src.utils.config as config
from src.utils.errors import NumericalInvariantError
from src.walker.states import PositionWindow, PureWalkerState, WalkerDensityMatrix


@dataclass
class Distribution:
    """Probability P(x) over the sites of a window, at time ``t`` if known."""

    window: PositionWindow
    probabilities: NDArray[np.float64]
    t: Optional[int] = None

    def __post_init__(self):
        self.probabilities = np.asarray(self.probabilities, dtype=np.float64)
        if self.probabilities.shape != (self.window.n_sites,):
            raise ValueError(
                f"Expected {self.window.n_sites} probabilities, got shape {self.probabilities.shape}"
            )

    @property
    def positions(self) -> NDArray[np.int64]:
        return self.window.positions

    def at(self, x: int) -> float:
        return float(self.probabilities[self.window.index(x)])

    def total(self) -> float:
        return float(self.probabilities.sum())

    def validate(self, tol: float = config.DRIFT_TOL) -> "Distribution":
        """
        Check non-negativity and normalisation.

        Raises:
            NumericalInvariantError: if either fails
        """
        smallest = float(self.probabilities.min()) if self.probabilities.size else 0.0
        if smallest < -config.ALGEBRAIC_TOL:
            raise NumericalInvariantError(f"Negative probability {smallest:.3e}")
        if abs(self.total() - 1.0) > tol:
            raise NumericalInvariantError(f"Distribution sums to {self.total():.15g}")
        return self

    def reflected(self) -> "Distribution":
        """Distribution of -x."""
        return Distribution(self.window, self.probabilities[::-1].copy(), self.t)


@dataclass
class MomentRecord:
    t: Optional[int]
    mean: float
    second_moment: float
    variance: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def distribution(rho: WalkerDensityMatrix, t: Optional[int] = None) -> Distribution:
    """
    P(x) = sum_c <x,c| rho |x,c>.

    Args:
        rho: Density matrix
        t: Optional time stamp carried on the result

    Returns:
        Distribution: Position probabilities

    Raises:
        NumericalInvariantError: if the diagonal carries an imaginary part
    """
    diagonal = np.diagonal(rho.matrix)
    imaginary = float(np.max(np.abs(diagonal.imag))) if diagonal.size else 0.0
    if imaginary > config.ALGEBRAIC_TOL:
        raise NumericalInvariantError(f"Density matrix diagonal has imaginary part {imaginary:.3e}")
    return Distribution(rho.window, diagonal.real.reshape(-1, 2).sum(axis=1), t)


def distribution_pure(state: PureWalkerState, t: Optional[int] = None) -> Distribution:
    """P0(x) = sum_c |psi(x, c)|^2."""
    return Distribution(state.window, (np.abs(state.amplitudes) ** 2).sum(axis=1), t)


def moments(d: Distribution) -> MomentRecord:
    """
    First and second moments and the variance of a distribution.

    Args:
        d: Normalised distribution

    Returns:
        MomentRecord: <x>, <x^2> and V = <x^2> - <x>^2
    """
    x = d.positions.astype(np.float64)
    mean = float(np.dot(x, d.probabilities))
    second = float(np.dot(x * x, d.probabilities))
    variance = second - mean * mean
    if variance < -config.DRIFT_TOL:
        raise NumericalInvariantError(f"Negative variance {variance:.3e}")
    return MomentRecord(t=d.t, mean=mean, second_moment=second, variance=variance)


def purity(rho: WalkerDensityMatrix) -> float:
    """Tr rho^2, computed as the squared Frobenius norm of a Hermitian matrix."""
    return float(np.vdot(rho.matrix, rho.matrix).real)


def linear_entropy(rho: WalkerDensityMatrix) -> float:
    """1 - Tr rho^2."""
    return 1.0 - purity(rho)


def reduced_coin_state(rho: WalkerDensityMatrix) -> NDArray[np.complex128]:
    """Partial trace over position, a 2x2 coin density matrix."""
    return np.einsum("xcxd->cd", rho.tensor)


def total_variation(d: Distribution) -> float:
    """
    Sum of absolute differences between neighbouring sites.

    One empty site is padded beyond each window edge, so the rise into and
    the fall out of the support are both counted.
    """
    padded = np.pad(d.probabilities, 1)
    return float(np.abs(np.diff(padded)).sum())
