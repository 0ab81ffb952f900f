"""Exception types shared across the package.

The CLI maps these onto exit codes, so parse, config, and fit problems
stay distinguishable all the way up the stack.
"""

from __future__ import annotations


class SeasonInfoError(Exception):
    """Base class for all package-specific errors."""


class ParseError(SeasonInfoError):
    """Invalid game-log input. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(SeasonInfoError):
    """Invalid protocol or generator configuration."""


class FitError(SeasonInfoError):
    """Model fit did not produce a usable solution.

    Carries solver diagnostics so callers can report or skip the
    offending replicate.
    """

    def __init__(self, message: str, iterations: int = 0,
                 gradient_norm: float = float("nan")):
        super().__init__(message)
        self.iterations = iterations
        self.gradient_norm = gradient_norm
