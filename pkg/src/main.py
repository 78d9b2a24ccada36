"""
Command-line front end for the decoherent quantum walk toolkit.
"""
import os
import sys
import argparse
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

# Add project root to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import src.utils.config as config
from src.analytic.convolution import coherent_reference, decoherent_distribution
from src.observables.distribution import Distribution, distribution, linear_entropy, moments, purity, total_variation
from src.observables.entanglement import negativity
from src.storage.result_storage import ResultStorage
from src.utils.config import RunConfig
from src.utils.errors import ConfigError, NumericalInvariantError, WindowOverflowError
from src.utils.logger import WalkLogger
from src.verification.suite import VerificationSuite
from src.walker.channel_factory import ChannelFactory, NoiseModel
from src.walker.evolution import evolve
from src.walker.states import BlochVector, CoinState, PureCoinState, init_state

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_NUMERICAL = 3

COMMANDS = ("simulate", "negativity", "distribution", "smoothness", "verify")
DEFAULT_GRIDS = {"negativity": config.DEFAULT_P_GRID, "smoothness": "0:1:0.01"}


class UsageExitParser(argparse.ArgumentParser):
    """ArgumentParser that exits with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def initial_coin(run_config: RunConfig) -> CoinState:
    """Bloch triple if given, otherwise the pure state (theta, phi)."""
    try:
        if run_config.bloch is not None:
            return BlochVector(*run_config.bloch)
        return PureCoinState(float(run_config.theta), float(run_config.phi))
    except ValueError as e:
        raise ConfigError("--bloch" if run_config.bloch is not None else "--theta", str(e))


def noise_model(run_config: RunConfig, p: Optional[float] = None) -> NoiseModel:
    if run_config.noise == "none":
        return NoiseModel.coherent()
    return NoiseModel(run_config.noise, run_config.p if p is None else p)


def run_items(fn: Callable[[Any], Any], items: Sequence[Any], workers: int, desc: str) -> List[Any]:
    """
    Evaluate ``fn`` over independent work items, in order.

    Args:
        fn: Picklable top-level function
        items: Work items
        workers: Process count; 1 runs in-process
        desc: Progress bar label

    Returns:
        List[Any]: Results in item order
    """
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in tqdm(items, desc=desc)]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(tqdm(executor.map(fn, items), total=len(items), desc=desc))


# Work items; top-level so a process pool can pickle them

def _simulate_item(item: Tuple[CoinState, NoiseModel, int]) -> Tuple[List[Dict[str, Any]], Distribution]:
    coin, noise, steps = item

    def record(rho):
        m = moments(distribution(rho))
        return {
            "mean": m.mean,
            "second_moment": m.second_moment,
            "variance": m.variance,
            "purity": purity(rho),
            "linear_entropy": linear_entropy(rho),
        }

    result = evolve(init_state(coin, steps), noise, steps, {"r": record})
    rows = [{"t": rec["t"], **rec["r"]} for rec in result.records]
    return rows, distribution(result.state, steps)


def _negativity_item(item: Tuple[CoinState, NoiseModel, int]) -> List[float]:
    coin, noise, steps = item
    result = evolve(init_state(coin, steps), noise, steps, {"N": negativity})
    return result.column("N")


def _coherent_distribution(coin: CoinState, steps: int) -> Distribution:
    if isinstance(coin, PureCoinState):
        return coherent_reference(coin, steps)
    return distribution(evolve(init_state(coin, steps), NoiseModel.coherent(), steps).state, steps)


def _smoothness_item(item: Tuple[CoinState, NoiseModel, int, str]) -> float:
    coin, noise, steps, method = item
    if method == "simulate" or noise.kind == "coin":
        d = distribution(evolve(init_state(coin, steps), noise, steps).state, steps)
    else:
        d = decoherent_distribution(_coherent_distribution(coin, steps), noise.p)
    return total_variation(d)


# Commands

def cmd_simulate(run_config: RunConfig, storage: ResultStorage) -> Tuple[int, Dict[str, Any]]:
    """
    Evolve one state (or one state per grid value of p) and store its tables.

    Writes distribution (x, probability) at t = T and moments
    (t, mean, second_moment, variance, purity, linear_entropy) for t = 0..T;
    a p grid adds a leading p column to both.
    """
    coin = initial_coin(run_config)
    if run_config.grid:
        if run_config.noise == "none":
            raise ConfigError("--p-grid", "a p grid needs --noise tunneling or coin")
        ps = run_config.grid
    else:
        ps = [run_config.p]

    items = [(coin, noise_model(run_config, p), run_config.steps) for p in ps]
    outputs = run_items(_simulate_item, items, run_config.workers, "simulate")

    moment_rows, dist_rows = [], []
    for p, (rows, final) in zip(ps, outputs):
        prefix = {"p": p} if run_config.grid else {}
        moment_rows += [{**prefix, **row} for row in rows]
        dist_rows += [
            {**prefix, "x": int(x), "probability": float(prob)}
            for x, prob in zip(final.positions, final.probabilities)
        ]

    storage.store_table("distribution", _columns(dist_rows))
    storage.store_table("moments", _columns(moment_rows))
    final_row = moment_rows[-1]
    return EXIT_OK, {"final_variance": final_row["variance"], "final_purity": final_row["purity"]}


def cmd_negativity(run_config: RunConfig, storage: ResultStorage) -> Tuple[int, Dict[str, Any]]:
    """
    Negativity against t for every grid p, and against p at t = T.

    Both noise kinds are scanned unless --noise names one.
    """
    coin = initial_coin(run_config)
    kinds = [run_config.noise] if run_config.noise != "none" else ["tunneling", "coin"]
    items = [
        (coin, noise, run_config.steps)
        for kind in kinds
        for noise in ChannelFactory.noise_grid(kind, run_config.grid)
    ]
    curves = run_items(_negativity_item, items, run_config.workers, "negativity")

    vs_t: Dict[str, List[Any]] = {"t": list(range(run_config.steps + 1))}
    vs_p: Dict[str, List[Any]] = {"p": list(run_config.grid)}
    for (_, noise, _), curve in zip(items, curves):
        label = f"{noise.kind}_p{noise.p:g}"
        vs_t[label] = list(curve)
        vs_t[f"{label}_unit"] = [2.0 * n for n in curve]
        vs_p.setdefault(noise.kind, []).append(curve[-1])
        vs_p.setdefault(f"{noise.kind}_unit", []).append(2.0 * curve[-1])

    storage.store_table("negativity_vs_t", vs_t)
    storage.store_table("negativity_vs_p", vs_p)
    return EXIT_OK, {kind: vs_p[kind] for kind in kinds}


def cmd_distribution(run_config: RunConfig, storage: ResultStorage) -> Tuple[int, Dict[str, Any]]:
    """
    Final distribution by simulation, by the convolution formula, or both.

    Returns the numerical-invariant exit status when both are computed and
    differ by more than 1e-8 at any site.
    """
    coin = initial_coin(run_config)
    noise = noise_model(run_config)
    steps = run_config.steps
    if run_config.method != "simulate" and noise.kind == "coin":
        raise ConfigError("--method", "the convolution formula covers tunneling noise only")

    table: Dict[str, List[Any]] = {}
    simulated = formula = None
    if run_config.method in ("simulate", "both"):
        simulated = distribution(evolve(init_state(coin, steps), noise, steps).state, steps)
        table["x"] = simulated.positions.tolist()
        table["simulate"] = simulated.probabilities.tolist()
    if run_config.method in ("formula", "both"):
        formula = decoherent_distribution(_coherent_distribution(coin, steps), noise.p)
        table["x"] = formula.positions.tolist()
        table["formula"] = formula.probabilities.tolist()

    summary: Dict[str, Any] = {}
    status = EXIT_OK
    if simulated is not None and formula is not None:
        diff = np.abs(simulated.probabilities - formula.probabilities)
        table["abs_diff"] = diff.tolist()
        summary["max_abs_diff"] = float(diff.max())
        if summary["max_abs_diff"] > config.CONVOLUTION_AGREEMENT_TOL:
            status = EXIT_NUMERICAL

    storage.store_table("distribution", table)
    return status, summary


def cmd_smoothness(run_config: RunConfig, storage: ResultStorage) -> Tuple[int, Dict[str, Any]]:
    """Total variation of the t = T distribution for every grid p."""
    coin = initial_coin(run_config)
    kind = "coin" if run_config.noise == "coin" else "tunneling"
    noises = ChannelFactory.noise_grid(kind, run_config.grid)
    items = [(coin, noise, run_config.steps, run_config.method) for noise in noises]
    values = run_items(_smoothness_item, items, run_config.workers, "smoothness")

    storage.store_table("smoothness", {"p": list(run_config.grid), "total_variation": values})
    return EXIT_OK, {"noise": kind}


def cmd_verify(run_config: RunConfig, storage: ResultStorage) -> Tuple[int, Dict[str, Any]]:
    """Run the invariant suite and print its pass/fail table."""
    suite = VerificationSuite(only=run_config.only)
    results = suite.run()
    print(suite.report(results))
    passed = suite.all_passed(results)
    summary = {"checks": len(results), "failed": sum(not r.passed for r in results)}
    return (EXIT_OK if passed else EXIT_VERIFY_FAILED), summary


HANDLERS = {
    "simulate": cmd_simulate,
    "negativity": cmd_negativity,
    "distribution": cmd_distribution,
    "smoothness": cmd_smoothness,
    "verify": cmd_verify,
}


def _columns(rows: List[Dict[str, Any]]) -> Dict[str, List[Any]]:
    return {key: [row[key] for row in rows] for key in rows[0]} if rows else {}


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per result family; flags default to None."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--steps", type=int, help="Number of walk steps T")
    common.add_argument("--noise", choices=config.NOISE_KINDS, help="Noise channel")
    common.add_argument("--p", type=float, help="Noise probability")
    common.add_argument("--p-grid", dest="p_grid", help="Probability grid a:b:step (b inclusive)")
    common.add_argument("--theta", type=float, help="Initial coin angle theta in [0, pi]")
    common.add_argument("--phi", type=float, help="Initial coin phase phi in [0, 2pi)")
    common.add_argument("--bloch", help="Initial coin Bloch coordinates r1,r2,r3")
    common.add_argument("--method", choices=config.DISTRIBUTION_METHODS, help="Distribution method")
    common.add_argument("--out", help="Output directory")
    common.add_argument("--format", choices=config.OUTPUT_FORMATS, help="Table format")
    common.add_argument("--only", choices=config.VERIFY_MODULES, help="Run one verification group")
    common.add_argument("--config", help="JSON file with flag values")
    common.add_argument("--workers", type=int, help="Processes for parameter scans")

    parser = UsageExitParser(description="Decoherent quantum walk simulations and checks")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=UsageExitParser)
    for command in COMMANDS:
        subparsers.add_parser(command, parents=[common], help=HANDLERS[command].__doc__.strip().splitlines()[0])
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge built-in defaults, the config file and explicit flags, in that order.

    Raises:
        ConfigError: naming the offending flag
    """
    names = {f.name for f in fields(RunConfig)} - {"command", "grid"}
    settings: Dict[str, Any] = {}
    if args.config:
        settings.update(config.load_config_file(args.config))
        unknown = set(settings) - names
        if unknown:
            raise ConfigError("--config", f"unknown field(s): {', '.join(sorted(unknown))}")
    settings.update({name: getattr(args, name) for name in names if getattr(args, name, None) is not None})

    settings.setdefault("steps", config.COMMAND_STEP_DEFAULTS.get(args.command, config.DEFAULT_STEPS))
    if args.command in DEFAULT_GRIDS:
        settings.setdefault("p_grid", DEFAULT_GRIDS[args.command])
    if isinstance(settings.get("bloch"), str):
        settings["bloch"] = config.parse_bloch(settings["bloch"])
    elif settings.get("bloch") is not None:
        settings["bloch"] = tuple(float(r) for r in settings["bloch"])

    return RunConfig(command=args.command, **settings).validate()


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main function; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logger = WalkLogger("main")

    try:
        run_config = resolve_config(args)
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    storage = ResultStorage(run_config.out, run_config.format)
    handler = logger.timed(run_config.command)(HANDLERS[run_config.command])

    try:
        status, summary = handler(run_config, storage)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (WindowOverflowError, NumericalInvariantError) as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL

    storage.store_metadata(run_config.command, run_config.to_dict(), summary)
    if status == EXIT_NUMERICAL:
        print(f"error: simulation and formula differ by {summary['max_abs_diff']:.3e}", file=sys.stderr)
    logger.info(f"{run_config.command} finished with status {status}")
    logger.save_metrics()
    return status


if __name__ == "__main__":
    sys.exit(main())
