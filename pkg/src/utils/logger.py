"""
Logging and run metrics for walks, scans and verification.
"""

import os
import json
import time
import logging
import functools
from logging.handlers import RotatingFileHandler
from typing import Any, Callable, Dict, Optional

import psutil

import src.utils.config as config

FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
CONSOLE_FORMAT = '%(levelname)s - %(message)s'
MAX_LOG_BYTES = 10 * 1024 * 1024


def _attach_handlers(logger: logging.Logger, log_dir: str, name: str) -> None:
    file_handler = RotatingFileHandler(
        os.path.join(log_dir, f"{name}.log"), maxBytes=MAX_LOG_BYTES, backupCount=5
    )
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter(FILE_FORMAT))

    console_handler = logging.StreamHandler()
    console_handler.setLevel(getattr(logging, config.LOG_LEVEL.upper(), logging.INFO))
    console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))

    logger.addHandler(file_handler)
    logger.addHandler(console_handler)


def rss_megabytes() -> Optional[float]:
    """Resident set size of this process in MB, or None when psutil cannot read it."""
    try:
        return psutil.Process(os.getpid()).memory_info().rss / (1024 * 1024)
    except (psutil.Error, OSError):
        return None


class WalkLogger:
    """
    Component logger that also accumulates run metrics.

    Metrics cover command durations, per-channel step timings with the largest
    state dimension seen, verification pass/fail counts and peak memory.
    """

    def __init__(self, name: str, log_dir: Optional[str] = None):
        """
        Initialize the logger.

        Args:
            name: Component name; also the log file stem
            log_dir: Directory for log files (default: config.LOG_DIR)
        """
        self.name = name
        self.log_dir = log_dir or config.LOG_DIR
        os.makedirs(self.log_dir, exist_ok=True)

        self.logger = logging.getLogger(f"qwalk.{name}")
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False
        if not self.logger.handlers:
            _attach_handlers(self.logger, self.log_dir, name)

        self._started = time.perf_counter()
        self.metrics: Dict[str, Any] = {
            "operations": {},
            "steps": {},
            "checks": {"passed": 0, "failed": 0},
            "peak_rss_mb": None,
            "errors": [],
        }

    def debug(self, message: str):
        self.logger.debug(message)

    def info(self, message: str):
        self.logger.info(message)

    def error(self, message: str, error: Optional[Exception] = None, context: Optional[Dict[str, Any]] = None):
        """Log an error; an attached exception is also kept in the metrics."""
        if error is not None:
            self.metrics["errors"].append({
                "type": type(error).__name__,
                "message": str(error),
                "context": context or {},
            })
        self.logger.error(message, exc_info=error is not None)

    def sample_memory(self) -> Optional[float]:
        """Read the current RSS and update the peak."""
        rss = rss_megabytes()
        if rss is not None:
            peak = self.metrics["peak_rss_mb"]
            self.metrics["peak_rss_mb"] = rss if peak is None else max(peak, rss)
        return rss

    def timed(self, operation: str) -> Callable:
        """Decorator recording the duration of ``operation``, including failed calls."""
        def decorator(func):
            @functools.wraps(func)
            def wrapper(*args, **kwargs):
                start = time.perf_counter()
                try:
                    result = func(*args, **kwargs)
                except Exception as e:
                    seconds = self._finish(operation, start)
                    self.error(f"{operation} failed after {seconds:.2f}s", e, {"operation": operation})
                    raise
                seconds = self._finish(operation, start)
                rss = self.metrics["peak_rss_mb"]
                memory = f", peak rss {rss:.0f} MB" if rss is not None else ""
                self.info(f"{operation} took {seconds:.2f}s{memory}")
                return result
            return wrapper
        return decorator

    def _finish(self, operation: str, start: float) -> float:
        seconds = time.perf_counter() - start
        self.metrics["operations"].setdefault(operation, []).append(seconds)
        self.sample_memory()
        return seconds

    def record_step(self, channel: str, dim: int, seconds: float):
        """Accumulate the time of one channel step on a ``dim``-dimensional state."""
        entry = self.metrics["steps"].setdefault(channel, {"count": 0, "seconds": 0.0, "max_dim": 0})
        entry["count"] += 1
        entry["seconds"] += seconds
        entry["max_dim"] = max(entry["max_dim"], dim)

    def record_check(self, passed: bool):
        self.metrics["checks"]["passed" if passed else "failed"] += 1

    def summary(self) -> Dict[str, Any]:
        """Aggregated view of the metrics collected so far."""
        operations = {
            op: {"count": len(durations), "total": sum(durations), "max": max(durations)}
            for op, durations in self.metrics["operations"].items()
            if durations
        }
        steps = {
            channel: {**entry, "mean": entry["seconds"] / entry["count"]}
            for channel, entry in self.metrics["steps"].items()
        }
        return {
            "elapsed": time.perf_counter() - self._started,
            "operations": operations,
            "steps": steps,
            "checks": dict(self.metrics["checks"]),
            "peak_rss_mb": self.metrics["peak_rss_mb"],
            "error_count": len(self.metrics["errors"]),
        }

    def save_metrics(self, filename: Optional[str] = None) -> str:
        """Write raw metrics and the summary as JSON; returns the path."""
        path = filename or os.path.join(self.log_dir, f"{self.name}_metrics.json")
        with open(path, 'w') as f:
            json.dump({"metrics": self.metrics, "summary": self.summary()}, f, indent=2)
        self.debug(f"Metrics saved to {path}")
        return path


@functools.lru_cache(maxsize=None)
def get_logger(name: str) -> WalkLogger:
    """Shared WalkLogger per component name."""
    return WalkLogger(name)
