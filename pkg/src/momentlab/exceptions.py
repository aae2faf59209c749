"""Exception classes."""

from __future__ import annotations


class MomentLabError(Exception):
    """Base class for all momentlab-related errors."""


class DomainError(MomentLabError, ValueError):
    """Raised when an argument lies outside the domain of an operation"""


class BoundaryPointError(DomainError):
    """Raised when a canonical moment lies on (or numerically at) the boundary
    of the unit interval.

    :param int index: 1-based position of the offending coordinate
    """

    def __init__(self, message: str, index: int) -> None:
        super().__init__(message)
        self.index = index


class NonInteriorError(DomainError):
    """Raised when a moment vector is not interior to the moment space.

    :param int index: 1-based position of the first failing coordinate
    """

    def __init__(self, message: str, index: int) -> None:
        super().__init__(message)
        self.index = index


class InsufficientLengthError(DomainError):
    """Raised when a coefficient or moment vector is too short for the request"""


class DimensionMismatchError(MomentLabError, ValueError):
    """Raised when matrices or samples have inconsistent dimensions"""


class DegenerateMatrixError(MomentLabError):
    """Raised when a Jacobi matrix has a non-positive off-diagonal entry"""


class ConvergenceError(MomentLabError, ArithmeticError):
    """Raised when an eigensolver exhausts its iteration budget"""


class ExperimentMethodNotImplementedError(MomentLabError, NotImplementedError):
    """Raised when calling an unimplemented hook of an experiment"""


class DuplicateExperimentNameError(MomentLabError):
    """Raised when registering two experiments with the same name"""


class DuplicateCheckNameError(MomentLabError):
    """Raised when registering two self-test checks with the same name"""


class ConfigError(MomentLabError):
    """Raised when an experiment configuration fails validation."""


class CheckFailedError(MomentLabError):
    """Raised when a self-test check or an acceptance assertion fails."""
