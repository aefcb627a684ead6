"""This module contains the exceptions raised by seasirs."""

from typing import List, Optional


class SeasirsBaseException(Exception):
    """The base exception all package exceptions derive from."""

    pass


class ValidationError(SeasirsBaseException):
    """Raised when an input value violates its documented range."""

    pass


class PreconditionError(ValidationError):
    """Raised when an operation's hypotheses do not hold for the given
    parameters, e.g. an autonomous-only formula called with β₁ ≠ β₂."""

    pass


class DomainError(ValidationError):
    """Raised when a state lies outside the invariant domain D₀."""

    pass


class ConfigError(ValidationError):
    """Raised when a scenario configuration cannot be decoded.

    Syntax errors carry the line and column of the offending character,
    validation failures the names of the offending fields.
    """

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        fields: Optional[List[str]] = None,
    ):
        super().__init__(message)
        self.line = line
        self.column = column
        self.fields = fields or []


class NumericalError(SeasirsBaseException):
    """The base exception for numeric failures."""

    pass


class MatrixOverflowError(NumericalError):
    """Raised when a matrix exponential leaves the representable range."""

    pass


class StepSizeUnderflowError(NumericalError):
    """Raised when the integrator cannot make progress.

    :param message: The solver's failure message
    :param time: The time at which integration stalled
    """

    def __init__(self, message: str, time: float):
        super().__init__("{} (at t={!r})".format(message, time))
        self.time = time


class BracketError(NumericalError):
    """Raised when no sign change of ρ(W_λ(ω,0)) − 1 can be bracketed."""

    pass


class ConvergenceError(NumericalError):
    """Raised when an iteration stops before meeting its tolerance.

    :param message: Description of the failed iteration
    :param residual: The last observed residual
    """

    def __init__(self, message: str, residual: float):
        super().__init__("{} (residual {!r})".format(message, residual))
        self.residual = residual
