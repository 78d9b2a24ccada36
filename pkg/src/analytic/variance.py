"""
Long-time moment and variance formulas of the noisy Hadamard walk.

The variance grows as V(t) = A t^2 + B t + C. Only A depends on the initial
coin state through r1 + r3, only B depends on the tunneling probability,
and the formulas drop a bounded oscillatory term, so they are accurate for
large t only.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.walker.states import BlochVector, PureCoinState

ALPHA = 1.0 - 1.0 / math.sqrt(2.0)
LONG_TIME_OFFSET = 3.0 * math.sqrt(2.0) / 8.0


@dataclass(frozen=True)
class VarianceCoefficients:
    A: float
    B: float
    C: float

    def variance(self, t: float) -> float:
        return self.A * t * t + self.B * t + self.C


def _check_probability(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Probability must lie in [0, 1], got {p}")
    return p


def variance_coefficients(r: BlochVector, p: float) -> VarianceCoefficients:
    """
    Coefficients of V(t) = A t^2 + B t + C.

    Args:
        r: Initial coin state
        p: Tunneling probability

    Returns:
        VarianceCoefficients: A, B and C
    """
    p = _check_probability(p)
    a = ALPHA - 4.0 * ALPHA ** 2 * (r.r1 + r.r3) ** 2
    b = 2.0 * math.sqrt(2.0) * ALPHA * (r.r3 ** 2 - r.r1 ** 2) + p
    c = -0.5 * (r.r3 - r.r1) ** 2 + LONG_TIME_OFFSET
    return VarianceCoefficients(A=a, B=b, C=c)


def analytic_first_moment(r: BlochVector, t: int) -> float:
    """<x>(t) = [(2 - sqrt2) t + 1/sqrt2] r1 + [(2 - sqrt2) t - 1/sqrt2] r3, for t >= 1."""
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    slope = 2.0 - math.sqrt(2.0)
    return (slope * t + 1.0 / math.sqrt(2.0)) * r.r1 + (slope * t - 1.0 / math.sqrt(2.0)) * r.r3


def analytic_second_moment(p: float, t: int) -> float:
    """
    <x^2>(t) = (1 - 1/sqrt2) t^2 + p t + 3 sqrt2 / 8.

    The constant is a long-time offset; at t = 0 the value is not the
    second moment of the initial state.
    """
    p = _check_probability(p)
    return ALPHA * t * t + p * t + LONG_TIME_OFFSET


def analytic_variance(r: BlochVector, p: float, t: int) -> float:
    return variance_coefficients(r, p).variance(t)


def max_variance_phase(theta: float) -> float:
    """
    Phase phi in [0, pi] that maximises the quadratic coefficient for ``theta``.

    Solves cos(phi) = -cot(2 theta), which makes r1 + r3 = 0.

    Raises:
        ValueError: when |cot 2theta| > 1 and no such phase exists
    """
    s = math.sin(2.0 * theta)
    if abs(s) < 1e-15:
        raise ValueError(f"No maximising phase for theta={theta}: cot(2 theta) is unbounded")
    cot = math.cos(2.0 * theta) / s
    if abs(cot) > 1.0 + 1e-12:
        raise ValueError(f"No maximising phase for theta={theta}: |cot(2 theta)| = {abs(cot):.6g} > 1")
    return math.acos(float(np.clip(-cot, -1.0, 1.0)))


def max_variance_state(theta: float) -> PureCoinState:
    """Pure coin state with maximal ballistic spreading for the given ``theta``."""
    return PureCoinState(theta=theta, phi=max_variance_phase(theta))


def quadratic_coefficient_bounds() -> Tuple[float, float]:
    """
    (lower, upper) bounds on A over valid coin states: (alpha - 3 alpha^2, alpha).

    The lower bound follows from (r1 + r3)^2 <= 3/4; the attainable minimum
    is the tighter ``quadratic_coefficient_minimum``.
    """
    return ALPHA - 3.0 * ALPHA ** 2, ALPHA


def quadratic_coefficient_minimum() -> float:
    """Smallest A over valid coin states, reached at r1 = r3 = +-1/(2 sqrt2)."""
    return ALPHA - 2.0 * ALPHA ** 2
