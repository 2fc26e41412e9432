"""
Exception hierarchy shared by every gradcode module.

Each class carries the process exit code the CLI uses when the error
escapes a command.
"""
from typing import Optional, Sequence


class GradCodeError(RuntimeError):
    """Base class for all gradcode errors."""

    exit_code = 1


class StructuralError(GradCodeError):
    """A scheme violates its structural invariants."""

    def __init__(self, message: str, violations: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.violations = list(violations or [])


class ConstructionInfeasible(GradCodeError):
    """Builder preconditions do not hold for the requested parameters."""

    exit_code = 2


class ParameterError(GradCodeError):
    exit_code = 2


class DesignError(GradCodeError):
    """A block list is not a t-design."""

    exit_code = 2

    def __init__(self, message: str, witness: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.witness = tuple(witness) if witness is not None else None


class DecodingError(GradCodeError):
    """A decoder failed where its construction guarantees success."""


class OracleTooLarge(GradCodeError):
    exit_code = 3


class InfiniteMeanError(GradCodeError):
    exit_code = 4


class ConfigError(GradCodeError):
    exit_code = 4


__all__ = [
    "GradCodeError",
    "StructuralError",
    "ConstructionInfeasible",
    "ParameterError",
    "DesignError",
    "DecodingError",
    "OracleTooLarge",
    "InfiniteMeanError",
    "ConfigError",
]
