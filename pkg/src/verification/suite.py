"""
Invariant suite behind the ``verify`` command.

Each check returns (passed, detail). Checks are grouped by the package
they exercise so a single group can be run on its own.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

import src.utils.config as config
from src.analytic.convolution import coherent_reference, decoherent_distribution
from src.analytic.variance import (
    analytic_first_moment,
    analytic_second_moment,
    analytic_variance,
)
from src.kspace.moments import moment_crosscheck
from src.kspace.spectrum import L_spectrum, gamma_partial_sum, is_degenerate
from src.kspace.superoperators import (
    apply_L_direct,
    build_G,
    build_G_dagger,
    build_G_dagger_fd,
    build_G_fd,
    build_J,
    build_J_fd,
    build_L,
    coin_kraus_k,
    q_identity_deviation,
)
from src.observables.distribution import distribution, moments, total_variation
from src.observables.entanglement import negativity
from src.utils.logger import get_logger
from src.walker.channel_factory import ChannelFactory, NoiseModel
from src.walker.evolution import evolve
from src.walker.kraus import kraus_completeness_check
from src.walker.operators import apply_kraus_dense
from src.walker.states import PositionWindow, PureCoinState, init_state

CheckOutcome = Tuple[bool, str]

UP = PureCoinState(0.0, 0.0)
SYMMETRIC = PureCoinState(math.pi / 4, math.pi / 2)
SEED = 20240101


@dataclass
class CheckResult:
    module: str
    name: str
    passed: bool
    detail: str


# walker

def check_kraus_completeness() -> CheckOutcome:
    worst = 0.0
    for noise in (NoiseModel.tunneling(0.3), NoiseModel.coin_measurement(0.7), NoiseModel.coherent()):
        passed, deviation = kraus_completeness_check(noise)
        worst = max(worst, deviation)
        if not passed:
            return False, f"{noise}: deviation {deviation:.3e}"
    singleton = len(ChannelFactory.create_channel(NoiseModel.tunneling(0.0)).kraus_operators(PositionWindow(2)))
    return singleton == 1, f"max deviation {worst:.3e}, tunneling(0) set size {singleton}"


def check_trace_preservation() -> CheckOutcome:
    worst = 0.0
    for noise in (NoiseModel.tunneling(0.1), NoiseModel.coin_measurement(0.5)):
        result = evolve(init_state(SYMMETRIC, 50), noise, 50, {"trace": lambda r: r.trace()}, check_every=0)
        worst = max(worst, max(abs(tr - 1.0) for tr in result.column("trace")))
    return worst < config.DRIFT_TOL, f"max |Tr rho - 1| = {worst:.3e}"


def check_drift_sign() -> CheckOutcome:
    mean = moments(distribution(evolve(init_state(UP, 20), NoiseModel.coherent(), 20).state)).mean
    return mean > 0.0, f"<x>(20) from |R> = {mean:.6f}"


def check_structural_matches_dense() -> CheckOutcome:
    window = PositionWindow(4)
    rho = init_state(SYMMETRIC, 4)
    rho = ChannelFactory.create_channel(NoiseModel.tunneling(0.4)).step(rho)
    worst = 0.0
    for noise in (NoiseModel.coherent(), NoiseModel.tunneling(0.3), NoiseModel.coin_measurement(0.6)):
        channel = ChannelFactory.create_channel(noise)
        reference = apply_kraus_dense(rho, channel.kraus_operators(window))
        worst = max(worst, float(np.max(np.abs(channel.step(rho).matrix - reference.matrix))))
    return worst < config.ALGEBRAIC_TOL, f"max deviation {worst:.3e}"


# observables

def check_negativity_subsystems() -> CheckOutcome:
    rho = evolve(init_state(UP, 10), NoiseModel.tunneling(0.5), 10).state
    coin, position = negativity(rho, "coin"), negativity(rho, "position")
    diff = abs(coin - position)
    return diff < config.NEGATIVITY_CROSSCHECK_TOL, f"coin {coin:.12f} vs position {position:.12f}"


def check_total_variation_reflection() -> CheckOutcome:
    d = distribution(evolve(init_state(UP, 30), NoiseModel.tunneling(0.2), 30).state, 30)
    diff = abs(total_variation(d) - total_variation(d.reflected()))
    return diff < config.ALGEBRAIC_TOL, f"|TV - TV reflected| = {diff:.3e}"


# analytic

def check_convolution_oracle(steps: int = 20) -> CheckOutcome:
    worst = 0.0
    for p in np.round(np.linspace(0.0, 1.0, 11), 12):
        result = evolve(init_state(UP, steps), NoiseModel.tunneling(p), steps,
                        {"P": lambda r: distribution(r).probabilities})
        for t, simulated in enumerate(result.column("P")):
            if t == 0:
                continue
            formula = decoherent_distribution(coherent_reference(UP, t), p).probabilities
            # Formula lives on a window of t steps, centred like the simulation window
            offset = 2 * (steps - t)
            worst = max(worst, float(np.max(np.abs(simulated[offset:offset + formula.size] - formula))))
    return worst < config.DRIFT_TOL, f"max site deviation {worst:.3e}"


def check_variance_shift(steps: int = 50) -> CheckOutcome:
    observers = {"m": lambda r: moments(distribution(r))}
    base = evolve(init_state(SYMMETRIC, steps), NoiseModel.coherent(), steps, observers).column("m")
    noisy = evolve(init_state(SYMMETRIC, steps), NoiseModel.tunneling(0.7), steps, observers).column("m")
    worst_mean = max(abs(a.mean - b.mean) for a, b in zip(base, noisy))
    worst_var = max(abs(b.variance - a.variance - 0.7 * t) for t, (a, b) in enumerate(zip(base, noisy)))
    passed = worst_mean < 1e-9 and worst_var < 1e-9
    return passed, f"mean deviation {worst_mean:.3e}, variance shift deviation {worst_var:.3e}"


def check_variance_formula(steps: int = 100, p: float = 0.3) -> CheckOutcome:
    rho = evolve(init_state(UP, steps), NoiseModel.tunneling(p), steps).state
    simulated = moments(distribution(rho)).variance
    predicted = analytic_variance(UP.bloch(), p, steps)
    rel = abs(simulated - predicted) / simulated
    return rel < 0.01, f"V_sim {simulated:.6f} vs formula {predicted:.6f} ({100 * rel:.3f}%)"


def check_parity(steps: int = 8) -> CheckOutcome:
    d = distribution(evolve(init_state(UP, steps), NoiseModel.tunneling(1.0), steps).state)
    odd = np.abs(d.positions) % 2 == 1
    worst = float(np.max(np.abs(d.probabilities[odd])))
    return worst < 1e-14, f"max odd-site probability {worst:.3e}"


# kspace

def _sample_k(n: int) -> np.ndarray:
    ks = np.random.default_rng(SEED).uniform(-math.pi, math.pi, n)
    return np.array([k for k in ks if not is_degenerate(k)])


def check_k_completeness() -> CheckOutcome:
    worst = 0.0
    for k in (0.0, math.pi / 3, -math.pi / 3, math.pi / 2, -math.pi / 2, 1.234):
        for p in (0.0, 0.3, 1.0):
            total = sum(c.conj().T @ c for c in coin_kraus_k(p, k))
            worst = max(worst, float(np.max(np.abs(total - np.eye(2)))))
    return worst < config.DRIFT_TOL, f"max deviation {worst:.3e}"


def check_trace_row() -> CheckOutcome:
    worst = 0.0
    for k in _sample_k(20):
        power = np.eye(4, dtype=np.complex128)
        for _ in range(20):
            power = build_L(k) @ power
            worst = max(worst, float(np.max(np.abs(power[0] - [1, 0, 0, 0]))))
    return worst < config.DRIFT_TOL, f"max first-row deviation {worst:.3e}"


def check_p_cancellation() -> CheckOutcome:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(20):
        k, p = rng.uniform(-math.pi, math.pi), rng.uniform()
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        worst = max(worst, float(np.max(np.abs(apply_L_direct(k, p, v) - build_L(k) @ v))))
    return worst < config.ALGEBRAIC_TOL, f"max deviation {worst:.3e}"


def check_spectrum() -> CheckOutcome:
    worst = max(L_spectrum(k).mismatch for k in _sample_k(50))
    return worst < config.DRIFT_TOL, f"max eigenvalue mismatch {worst:.3e}"


def check_q_identity() -> CheckOutcome:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(20):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        worst = max(worst, q_identity_deviation(rng.uniform(-math.pi, math.pi), rng.uniform(), v))
    return worst < config.DRIFT_TOL, f"max deviation {worst:.3e}"


def check_finite_differences() -> CheckOutcome:
    worst = 0.0
    for k in _sample_k(10):
        for p in (0.0, 0.5, 1.0):
            worst = max(
                worst,
                float(np.max(np.abs(build_G_fd(k, p) - build_G(k)))),
                float(np.max(np.abs(build_G_dagger_fd(k, p) - build_G_dagger(k)))),
                float(np.max(np.abs(build_J_fd(k, p) - build_J(k, p)))),
            )
    return worst < 1e-8, f"max finite-difference deviation {worst:.3e}"


def check_gamma_bounded() -> CheckOutcome:
    gaps = [gamma_partial_sum(1.0, t).max_difference for t in (10, 50, 200)]
    return max(gaps) <= 10.0, "max |numeric - closed| at t=10,50,200: " + ", ".join(f"{g:.4f}" for g in gaps)


def check_moment_quadrature(steps: int = 50) -> CheckOutcome:
    r = UP.bloch()
    mean, second = moment_crosscheck(r, steps)
    mean_rel = abs(mean - analytic_first_moment(r, steps)) / abs(mean)
    second_rel = abs(second - analytic_second_moment(0.0, steps)) / second
    passed = mean_rel < 0.01 and second_rel < 0.01
    return passed, f"relative gaps: mean {100 * mean_rel:.3f}%, second {100 * second_rel:.3f}%"


def check_moment_simulation(steps: int = 20, p: float = 0.4) -> CheckOutcome:
    mean, second = moment_crosscheck(SYMMETRIC.bloch(), steps, p)
    record = moments(distribution(evolve(init_state(SYMMETRIC, steps), NoiseModel.tunneling(p), steps).state))
    worst = max(abs(mean - record.mean), abs(second - record.second_moment))
    return worst < config.CONVOLUTION_AGREEMENT_TOL, f"max deviation from simulation {worst:.3e}"


CHECKS: Dict[str, List[Tuple[str, Callable[[], CheckOutcome]]]] = {
    "walker": [
        ("kraus completeness", check_kraus_completeness),
        ("trace preservation", check_trace_preservation),
        ("drift sign of |R>", check_drift_sign),
        ("structural step equals Kraus sum", check_structural_matches_dense),
    ],
    "observables": [
        ("negativity over either subsystem", check_negativity_subsystems),
        ("total variation under reflection", check_total_variation_reflection),
    ],
    "analytic": [
        ("convolution equals simulation", check_convolution_oracle),
        ("tunneling keeps mean, adds p*t variance", check_variance_shift),
        ("variance formula at t=100", check_variance_formula),
        ("odd sites empty at p=1", check_parity),
    ],
    "kspace": [
        ("coin Kraus completeness", check_k_completeness),
        ("trace-preserving first row", check_trace_row),
        ("L independent of p", check_p_cancellation),
        ("spectrum of L", check_spectrum),
        ("J = s3 W s3 + p W", check_q_identity),
        ("finite-difference G, G+, J", check_finite_differences),
        ("Gamma partial sums bounded", check_gamma_bounded),
        ("k-integral moments vs formulas", check_moment_quadrature),
        ("k-integral moments vs simulation", check_moment_simulation),
    ],
}


class VerificationSuite:
    """Runs the invariant checks and reports a pass/fail table."""

    def __init__(self, only: Optional[str] = None):
        """
        Initialize the suite.

        Args:
            only: Restrict to one group ('walker', 'observables', 'analytic', 'kspace')
        """
        if only is not None and only not in CHECKS:
            raise ValueError(f"Unknown check group {only!r}; expected one of {sorted(CHECKS)}")
        self.only = only
        self.logger = get_logger("verify")

    def selected(self) -> List[Tuple[str, str, Callable[[], CheckOutcome]]]:
        return [
            (module, name, fn)
            for module, checks in CHECKS.items()
            if self.only in (None, module)
            for name, fn in checks
        ]

    def run(self) -> List[CheckResult]:
        """
        Run every selected check; an exception counts as a failure.

        Returns:
            List[CheckResult]: One result per check, in registration order
        """
        results = []
        for module, name, fn in tqdm(self.selected(), desc="verify", unit="check"):
            try:
                passed, detail = fn()
            except Exception as e:
                self.logger.error(f"Check '{module}: {name}' raised", e, {"module": module})
                passed, detail = False, f"{type(e).__name__}: {e}"
            results.append(CheckResult(module, name, bool(passed), detail))
            self.logger.record_check(passed)
            self.logger.info(f"[{'PASS' if passed else 'FAIL'}] {module}: {name} ({detail})")
        return results

    @staticmethod
    def all_passed(results: List[CheckResult]) -> bool:
        return all(result.passed for result in results)

    @staticmethod
    def report(results: List[CheckResult]) -> str:
        table = pd.DataFrame(
            {
                "module": [r.module for r in results],
                "check": [r.name for r in results],
                "status": ["PASS" if r.passed else "FAIL" for r in results],
                "detail": [r.detail for r in results],
            }
        )
        return table.to_string(index=False)
