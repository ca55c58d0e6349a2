"""Exception hierarchy shared by the package."""

from __future__ import annotations


class UnsspError(Exception):
    """Base class for all errors raised by this package."""


class GraphParseError(UnsspError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MaskError(UnsspError):
    """Arc mask used against its contract (double removal, restoring a present arc)."""


class LambdaError(UnsspError):
    """Malformed or out-of-range weight vector specification."""


class ValidationError(UnsspError):
    """Input rejected before any search starts."""


class SizeGateError(UnsspError):
    """Instance too large for an exhaustive routine."""
