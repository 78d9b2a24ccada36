"""
Position moments from momentum-space integrals.

With a_m = L^{m-1} r and the accumulated cross terms
u_{m+1} = L u_m + G a_m, v_{m+1} = L v_m + G^dagger a_m (u_1 = v_1 = 0):

    <x>   = Re (i / 2pi) int sum_m Tr(G a_m) dk
    <x^2> = (1 / 2pi) int sum_m [Tr(G^dagger u_m + G v_m) + Tr(J a_m)] dk

No term is dropped, so the result matches the simulated walk at every t.
The trace of sum_i r_i sigma_i is 2 r_0.
"""

import math
from typing import Tuple

import numpy as np
from scipy.integrate import trapezoid

import src.utils.config as config
from src.kspace.superoperators import build_G, build_G_dagger, build_J, build_L
from src.walker.states import BlochVector


def _apply(ops: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    return np.einsum("kij,kj->ki", ops, vectors)


def moment_crosscheck(
    r: BlochVector,
    t: int,
    p: float = 0.0,
    n_points: int = config.QUADRATURE_POINTS,
) -> Tuple[float, float]:
    """
    First and second moments after t steps by trapezoid quadrature over k.

    Args:
        r: Initial coin state
        t: Number of steps, at most 60
        p: Tunneling probability (enters through J only)
        n_points: Quadrature intervals over [-pi, pi]

    Returns:
        Tuple[float, float]: (<x>, <x^2>)
    """
    if not 0 <= t <= config.CROSSCHECK_MAX_STEPS:
        raise ValueError(f"t must lie in [0, {config.CROSSCHECK_MAX_STEPS}], got {t}")
    if n_points < 4096:
        raise ValueError(f"Need at least 4096 quadrature points, got {n_points}")

    ks = np.linspace(-math.pi, math.pi, n_points + 1)
    step, g, g_dagger, j = build_L(ks), build_G(ks), build_G_dagger(ks), build_J(ks, p)

    a = np.tile(np.array([r.r0, r.r1, r.r2, r.r3], dtype=np.complex128), (ks.size, 1))
    u = np.zeros_like(a)
    v = np.zeros_like(a)
    first = np.zeros(ks.size, dtype=np.complex128)
    second = np.zeros(ks.size, dtype=np.complex128)

    for _ in range(t):
        g_a = _apply(g, a)
        first += 2.0 * g_a[:, 0]
        second += 2.0 * (_apply(g_dagger, u)[:, 0] + _apply(g, v)[:, 0] + _apply(j, a)[:, 0])
        u = _apply(step, u) + g_a
        v = _apply(step, v) + _apply(g_dagger, a)
        a = _apply(step, a)

    mean = float(np.real(1j * trapezoid(first, ks) / (2.0 * math.pi)))
    second_moment = float(np.real(trapezoid(second, ks) / (2.0 * math.pi)))
    return mean, second_moment
