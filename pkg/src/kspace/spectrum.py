"""
Spectrum of L_k and the partial sums Gamma_t = sum_{m=1}^{t} L_k^{m-1}.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import linear_sum_assignment

from src.kspace.superoperators import build_L

# |k mod pi| below this makes theta -> 0 and the -1 eigenvalue double
DEGENERATE_K = 1e-3


@dataclass
class SpectralData:
    eigenvalues: NDArray[np.complex128]
    expected: NDArray[np.complex128]
    theta: float
    mismatch: float


@dataclass
class GammaComparison:
    numeric: NDArray[np.complex128]
    closed: NDArray[np.complex128]

    @property
    def max_difference(self) -> float:
        return float(np.max(np.abs(self.numeric - self.closed)))


def is_degenerate(k: float) -> bool:
    r = math.remainder(k, math.pi)
    return abs(r) < DEGENERATE_K


def spectral_angle(k: float) -> float:
    """theta in [0, pi/2] with cos(theta) = cos^2(k)."""
    return math.acos(min(1.0, math.cos(k) ** 2))


def L_spectrum(k: float) -> SpectralData:
    """
    Eigenvalues of L_k next to the closed form {1, 1, e^{i(theta+pi)}, e^{-i(theta+pi)}}.

    The two multisets are paired by minimum-cost assignment, so ``mismatch``
    does not depend on the order the eigensolver returns.

    Args:
        k: Momentum

    Returns:
        SpectralData: Numeric and closed-form eigenvalues with their largest pairing gap
    """
    theta = spectral_angle(k)
    eigenvalues = np.linalg.eigvals(build_L(k))
    expected = np.array(
        [1.0, 1.0, np.exp(1j * (theta + math.pi)), np.exp(-1j * (theta + math.pi))], dtype=np.complex128
    )
    cost = np.abs(eigenvalues[:, None] - expected[None, :])
    rows, cols = linear_sum_assignment(cost)
    return SpectralData(
        eigenvalues=eigenvalues,
        expected=expected,
        theta=theta,
        mismatch=float(cost[rows, cols].max()),
    )


def gamma_closed_form(k: float, t: int) -> NDArray[np.complex128]:
    """
    Non-oscillating part of Gamma_t: the eigenvalue-1 projector times t plus a constant.

    Exact up to a bounded term that oscillates in t.
    """
    c2 = math.cos(k) ** 2
    s2 = math.sin(k) ** 2
    s = math.sin(2.0 * k)
    delta = 2.0 * (c2 + 1.0)
    scaled = np.array(
        [
            [2.0 * t * (c2 + 1.0), 0.0, 0.0, 0.0],
            [0.0, 2.0 * t * c2 + 1.0, t * s, 2.0 * t * c2 - 1.0],
            [0.0, (t - 1.0) * s, 2.0 * (c2 + t * s2), t * s],
            [0.0, 2.0 * (t - 1.0) * c2 + 1.0, (t - 1.0) * s, 2.0 * t * c2 + 1.0],
        ],
        dtype=np.complex128,
    )
    return scaled / delta


def gamma_numeric(k: float, t: int) -> NDArray[np.complex128]:
    """sum_{m=1}^{t} L_k^{m-1} by iterated multiplication."""
    step = build_L(k)
    power = np.eye(4, dtype=np.complex128)
    total = np.zeros((4, 4), dtype=np.complex128)
    for _ in range(t):
        total += power
        power = step @ power
    return total


def gamma_partial_sum(k: float, t: int) -> GammaComparison:
    """
    Gamma_t numerically and in closed form.

    Args:
        k: Momentum, at least 1e-3 away from multiples of pi
        t: Number of terms, t >= 1

    Returns:
        GammaComparison: Both matrices; their difference stays bounded in t
    """
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    if is_degenerate(k):
        raise ValueError(f"k={k} is within {DEGENERATE_K} of a multiple of pi")
    return GammaComparison(numeric=gamma_numeric(k, t), closed=gamma_closed_form(k, t))
