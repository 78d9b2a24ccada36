"""
Multi-step evolution with per-step observers.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional

from src.utils.errors import WindowOverflowError
from src.utils.logger import get_logger
from src.walker.channel_factory import ChannelFactory, NoiseModel
from src.walker.channels.coherent_channel import coherent_step_pure
from src.walker.states import PureCoinState, PureWalkerState, WalkerDensityMatrix

Observer = Callable[[WalkerDensityMatrix], Any]


@dataclass
class EvolutionResult:
    """Final state plus one record per time step (t = 0 included)."""

    state: WalkerDensityMatrix
    records: List[Dict[str, Any]] = field(default_factory=list)

    def column(self, name: str) -> List[Any]:
        return [record[name] for record in self.records]


def evolve(
    rho0: WalkerDensityMatrix,
    noise: NoiseModel,
    steps: int,
    observers: Optional[Mapping[str, Observer]] = None,
    check_every: int = 1,
) -> EvolutionResult:
    """
    Apply the channel for ``noise`` ``steps`` times.

    Args:
        rho0: Initial state; left unmodified
        noise: Noise model selecting the channel
        steps: Number of steps, at most the window's total_steps
        observers: Named callbacks evaluated on the state at t = 0 and after every step
        check_every: Verify trace and Hermiticity every this many steps (0 disables)

    Returns:
        EvolutionResult: Final state and per-step observer records

    Raises:
        WindowOverflowError: if ``steps`` exceeds the window
        NumericalInvariantError: if the state drifts beyond tolerance
    """
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    if steps > rho0.window.total_steps:
        raise WindowOverflowError(
            f"{steps} steps requested but the window only holds {rho0.window.total_steps}"
        )

    logger = get_logger("walker")
    channel = ChannelFactory.create_channel(noise)
    observers = dict(observers or {})
    logger.debug(f"Evolving {steps} steps with {channel!r} on {rho0.window.dim}-dim window")

    def observe(t: int, rho: WalkerDensityMatrix) -> Dict[str, Any]:
        record = {"t": t}
        for name, observer in observers.items():
            record[name] = observer(rho)
        return record

    rho = rho0
    records = [observe(0, rho)]
    for t in range(1, steps + 1):
        start = time.perf_counter()
        rho = channel.step(rho)
        logger.record_step(channel.name, rho.window.dim, time.perf_counter() - start)
        if check_every and t % check_every == 0:
            rho.check_invariants()
        records.append(observe(t, rho))
        logger.debug(f"{channel.name} step {t}/{steps} done")

    return EvolutionResult(state=rho, records=records)


def evolve_pure(coin: PureCoinState, steps: int) -> PureWalkerState:
    """
    Coherent walk of a pure state from x = 0.

    Args:
        coin: Initial coin state
        steps: Number of steps

    Returns:
        PureWalkerState: State after ``steps`` steps on a window of ``steps``
    """
    state = PureWalkerState.localized(coin, steps)
    for _ in range(steps):
        state = coherent_step_pure(state)
    return state
