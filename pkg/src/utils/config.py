"""
Configuration settings for the quantum walk toolkit.
"""

import os
import json
import math
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from dotenv import load_dotenv

from src.utils.errors import ConfigError

# Pick up overrides from a local .env file if present
load_dotenv()

# Logging Settings
LOG_LEVEL = os.getenv("QWALK_LOG_LEVEL", "INFO")
LOG_DIR = os.getenv("QWALK_LOG_DIR", "logs")

# Output Settings
OUTPUT_DIR = "results"
CSV_FLOAT_FORMAT = "%.17g"  # 17 significant digits round-trip a double
METADATA_FILENAME = "run_metadata.json"

# Numerical tolerances
ALGEBRAIC_TOL = 1e-12       # algebraic identities (norms, completeness)
DRIFT_TOL = 1e-10           # accumulated per-step drift over <= 200 steps
HERMITIAN_TOL = 1e-10       # Hermiticity accepted by the eigensolver
NEGATIVITY_ZERO_THRESHOLD = 1e-10
NEGATIVITY_CROSSCHECK_TOL = 1e-9
CONVOLUTION_AGREEMENT_TOL = 1e-8
BLOCH_TOL = 1e-12

# k-space settings
FINITE_DIFFERENCE_STEP = 1e-6
QUADRATURE_POINTS = int(os.getenv("QWALK_QUADRATURE_POINTS", "4096"))
CROSSCHECK_MAX_STEPS = 60

# Run defaults
DEFAULT_STEPS = 100
DEFAULT_NOISE = "none"
DEFAULT_THETA = 0.0
DEFAULT_PHI = 0.0
DEFAULT_P = 0.0
DEFAULT_P_GRID = "0:1:0.1"
DEFAULT_FORMAT = "csv"
DEFAULT_METHOD = "both"
WORKERS = int(os.getenv("QWALK_WORKERS", "1"))

# Negativity curves need a dense eigensolve per step, so they default shorter
COMMAND_STEP_DEFAULTS = {
    "simulate": DEFAULT_STEPS,
    "negativity": 30,
    "distribution": 30,
    "smoothness": DEFAULT_STEPS,
}

NOISE_KINDS = ("none", "tunneling", "coin")
OUTPUT_FORMATS = ("csv", "json")
DISTRIBUTION_METHODS = ("simulate", "formula", "both")
VERIFY_MODULES = ("walker", "observables", "analytic", "kspace")


def parse_p_grid(text: str) -> List[float]:
    """
    Parse a probability grid of the form ``a:b:step`` (b inclusive).

    Args:
        text: Grid string

    Returns:
        List[float]: Grid values rounded to 12 decimals
    """
    try:
        start, stop, step = (float(part) for part in text.split(":"))
    except ValueError:
        raise ConfigError("--p-grid", f"expected a:b:step, got {text!r}")

    if step <= 0 or stop < start:
        raise ConfigError("--p-grid", f"empty or descending grid {text!r}")

    values = np.arange(start, stop + step / 2, step)
    grid = [round(float(v), 12) for v in values]
    for value in grid:
        if not 0.0 <= value <= 1.0:
            raise ConfigError("--p-grid", f"grid value {value} outside [0, 1]")
    return grid


def parse_bloch(text: str) -> Tuple[float, float, float]:
    """Parse ``r1,r2,r3`` into a float triple."""
    try:
        r1, r2, r3 = (float(part) for part in text.split(","))
    except ValueError:
        raise ConfigError("--bloch", f"expected r1,r2,r3, got {text!r}")
    return r1, r2, r3


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Load run settings from a JSON file.

    Field names are the flag names with dashes replaced by underscores.

    Args:
        path: Path to the JSON file

    Returns:
        Dict[str, Any]: Settings keyed by field name
    """
    if not os.path.exists(path):
        raise ConfigError("--config", f"file not found: {path}")

    with open(path, "r") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError("--config", f"invalid JSON in {path}: {e}")

    if not isinstance(data, dict):
        raise ConfigError("--config", "top-level JSON value must be an object")

    return {key.replace("-", "_"): value for key, value in data.items()}


@dataclass
class RunConfig:
    """Settings for a single command-line run."""

    command: str
    steps: int = DEFAULT_STEPS
    noise: str = DEFAULT_NOISE
    p: float = DEFAULT_P
    p_grid: Optional[str] = None
    theta: float = DEFAULT_THETA
    phi: float = DEFAULT_PHI
    bloch: Optional[Tuple[float, float, float]] = None
    method: str = DEFAULT_METHOD
    out: str = OUTPUT_DIR
    format: str = DEFAULT_FORMAT
    only: Optional[str] = None
    workers: int = WORKERS
    grid: List[float] = field(default_factory=list)

    def validate(self) -> "RunConfig":
        """
        Check every field before any computation starts.

        Raises:
            ConfigError: naming the offending flag
        """
        if not isinstance(self.steps, int) or self.steps < 0:
            raise ConfigError("--steps", f"must be a non-negative integer, got {self.steps!r}")
        if self.noise not in NOISE_KINDS:
            raise ConfigError("--noise", f"must be one of {NOISE_KINDS}, got {self.noise!r}")
        if not 0.0 <= float(self.p) <= 1.0:
            raise ConfigError("--p", f"must lie in [0, 1], got {self.p}")
        if not 0.0 <= float(self.theta) <= math.pi:
            raise ConfigError("--theta", f"must lie in [0, pi], got {self.theta}")
        if not 0.0 <= float(self.phi) < 2 * math.pi:
            raise ConfigError("--phi", f"must lie in [0, 2pi), got {self.phi}")
        if self.method not in DISTRIBUTION_METHODS:
            raise ConfigError("--method", f"must be one of {DISTRIBUTION_METHODS}, got {self.method!r}")
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError("--format", f"must be one of {OUTPUT_FORMATS}, got {self.format!r}")
        if self.only is not None and self.only not in VERIFY_MODULES:
            raise ConfigError("--only", f"must be one of {VERIFY_MODULES}, got {self.only!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError("--workers", f"must be a positive integer, got {self.workers!r}")

        if self.bloch is not None:
            r1, r2, r3 = self.bloch
            if r1 * r1 + r2 * r2 + r3 * r3 > 0.25 + BLOCH_TOL:
                raise ConfigError("--bloch", "r1^2 + r2^2 + r3^2 must not exceed 1/4")

        if self.p_grid is not None:
            self.grid = parse_p_grid(self.p_grid)

        return self

    def to_dict(self) -> Dict[str, Any]:
        """Config echo for the metadata sidecar."""
        data = asdict(self)
        if data["bloch"] is not None:
            data["bloch"] = list(data["bloch"])
        return data
