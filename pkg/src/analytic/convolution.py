"""
Exact tunneling-noise distribution as a convolution of the coherent one.

Each step hops the walker by +1 or -1 with probability p/2 each,
independently of the coin, so after t steps the displacement d = n - 2m
(n hops, m of them to the left) is added to the coherent position:

    P(x, t) = sum_d w_t(d) P0(x - d, t)
    w_t(d)  = sum_{n - 2m = d} C(t, n) C(n, m) (1 - p)^(t - n) (p / 2)^n
"""

import math

import numpy as np
from numpy.typing import NDArray
from scipy.special import gammaln, xlogy

from src.observables.distribution import Distribution, distribution_pure
from src.walker.evolution import evolve_pure
from src.walker.states import PureCoinState


def _log_binomial(n: NDArray, k: NDArray) -> NDArray:
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def tunnel_kernel(t: int, p: float) -> NDArray[np.float64]:
    """
    Displacement weights w_t(d) for d = -t..t.

    Weights are formed in log space so large t does not overflow the
    binomial coefficients; terms with a zero factor are exactly zero.

    Args:
        t: Number of steps
        p: Tunneling probability

    Returns:
        NDArray[np.float64]: Array of length 2t + 1, index d + t
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Tunneling probability must lie in [0, 1], got {p}")
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")

    n, m = np.meshgrid(np.arange(t + 1), np.arange(t + 1), indexing="ij")
    valid = m <= n
    n, m = n[valid], m[valid]

    log_w = (
        _log_binomial(t, n)
        + _log_binomial(n, m)
        + xlogy(t - n, 1.0 - p)
        + xlogy(n, p / 2.0)
    )
    kernel = np.zeros(2 * t + 1)
    np.add.at(kernel, n - 2 * m + t, np.exp(log_w))
    return kernel


def full_noise_kernel(t: int) -> NDArray[np.float64]:
    """Weights for p = 1: every step hops, w_t(t - 2m) = C(t, m) / 2^t."""
    m = np.arange(t + 1)
    kernel = np.zeros(2 * t + 1)
    kernel[t - 2 * m + t] = np.exp(_log_binomial(t, m) - t * math.log(2.0))
    return kernel


def _convolve(p0: Distribution, kernel: NDArray[np.float64]) -> Distribution:
    if p0.t is None:
        raise ValueError("Coherent distribution must carry its time stamp t")
    if p0.window.total_steps < p0.t:
        raise ValueError(f"Window for {p0.window.total_steps} steps cannot hold the t={p0.t} result")
    # Odd kernel length keeps mode="same" centred on the window
    probabilities = np.convolve(p0.probabilities, kernel, mode="same")
    return Distribution(p0.window, probabilities, p0.t).validate()


def coherent_reference(coin: PureCoinState, t: int) -> Distribution:
    """Coherent distribution P0(x, t) from the pure-state walk."""
    return distribution_pure(evolve_pure(coin, t), t)


def decoherent_distribution(p0: Distribution, p: float) -> Distribution:
    """
    Distribution after ``p0.t`` steps with tunneling probability ``p``.

    Args:
        p0: Coherent distribution at time t
        p: Tunneling probability

    Returns:
        Distribution: Convolved distribution on the same window
    """
    return _convolve(p0, tunnel_kernel(p0.t if p0.t is not None else 0, p))


def full_noise_distribution(p0: Distribution) -> Distribution:
    """Distribution for p = 1; only even sites are occupied."""
    return _convolve(p0, full_noise_kernel(p0.t if p0.t is not None else 0))
