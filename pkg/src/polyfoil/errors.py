"""Exception hierarchy shared by every module.

The CLI maps these onto its exit codes: domain problems exit 2, numerical
failures exit 3.
"""


class PolyfoilError(Exception):
    """Base class for all library errors."""


class DomainError(PolyfoilError, ValueError):
    """Input lies outside the open set an operation is defined on."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class ValidationError(DomainError):
    """Input is malformed: wrong tuple length, non-finite or non-positive entries."""


class ConditioningError(DomainError):
    """A fan triangle is too close to degenerate for a reliable derivative."""


class ConvergenceError(PolyfoilError, ArithmeticError):
    """An iterative solver stopped without meeting its tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual
