"""Exception hierarchy shared by all modules.

``DomainError`` subclasses map to CLI exit code 2, ``NumericError``
subclasses to exit code 3.
"""

from __future__ import annotations


class ConeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ConeError, ValueError):
    """An input lies outside the domain of the requested operation."""


class ConfigurationError(ConeError, ValueError):
    """Unsupported option, e.g. an unknown regulator profile."""


class WrongBranchError(DomainError):
    """The sign of mu^2 selects a different spectrum formula."""


class OutOfWindowError(DomainError):
    """The effective momentum lies outside 0 <= mu < 1."""


class NoBoundStateError(DomainError):
    """The requested configuration admits no bound state."""


class NoRealClosedForm(ConeError):
    """The closed-form bracket is non-positive, so no real energy follows.

    The transcendental solver in :mod:`conebound.saep` decides whether a
    bound state exists in that case.
    """

    def __init__(self, message: str, bracket: float):
        super().__init__(message)
        self.bracket = bracket


class NumericError(ConeError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class PoleError(NumericError):
    """A logarithmic derivative was requested at a zero of its function."""

    def __init__(self, message: str, location: float):
        super().__init__(message)
        self.location = location


class FitFailure(NumericError):
    """No extension parameter reproduces the requested boundary condition."""

    def __init__(self, message: str, residual_curve=None):
        super().__init__(message)
        self.residual_curve = residual_curve


class MultiplicityError(NumericError):
    """More than one sign change where exactly one was expected."""

    def __init__(self, message: str, brackets):
        super().__init__(message)
        self.brackets = brackets
