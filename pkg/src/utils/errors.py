"""
Error types raised by the toolkit.
"""


class WindowOverflowError(RuntimeError):
    """The walker's support would leave the preallocated position window."""


class NumericalInvariantError(ArithmeticError):
    """A state or result violates a numerical invariant (trace, Hermiticity, normalisation)."""


class ConfigError(ValueError):
    """Invalid run configuration; carries the name of the offending flag."""

    def __init__(self, flag: str, message: str):
        self.flag = flag
        super().__init__(f"{flag}: {message}")
