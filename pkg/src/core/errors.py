"""
Error kinds raised across hydrolimit.

Each class derives from the builtin normally raised for the same situation, so
callers that only care about "bad input" can keep catching ValueError.
"""

from typing import Optional


class ConfigurationError(ValueError):
    """Invalid grid, stepper or run configuration."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidStateError(ValueError):
    """A field or state violates an admissibility constraint."""


class DegenerateDataError(ValueError):
    """An initial-data recipe produced an identically zero field."""


class InputError(ValueError):
    """Malformed input to a diagnostic or fit."""


class DegenerateFitError(ValueError):
    """A log-log fit cannot be formed (zero error values, too few points)."""


class NumericalInconsistencyError(RuntimeError):
    """A computed quantity contradicts an identity that must hold exactly."""


class BlowUpError(RuntimeError):
    """Non-finite values or a collapsing CFL time step during time stepping."""

    def __init__(self, message: str, step: Optional[int] = None, t: Optional[float] = None):
        self.step = step
        self.t = t
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)


class OutputError(OSError):
    """Output directory cannot be created or written."""
