"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``DomainError`` -> 2,
``ConvergenceError`` -> 3, everything else derived from ``IntregError`` -> 1.
"""

from __future__ import annotations


class IntregError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(IntregError, ValueError):
    """An argument is outside the supported range."""


class DomainError(IntregError, ValueError):
    """The mathematical object is undefined for the given input."""


class ConvergenceError(IntregError, ArithmeticError):
    """Requested precision was not reached within the iteration cap.

    ``partial`` carries the best value computed before giving up.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class NumericError(IntregError, ArithmeticError):
    """Root finding or a similar numeric step failed.

    ``index`` identifies the offending coordinate when applicable.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class ParityError(ParameterError):
    """A cycle combination violates f(-a) = (-1)^r f(a)."""


class UnsupportedCycleError(ParameterError):
    """The requested cycle is not in the catalog."""


class NotTorsionCompatible(DomainError):
    """The normalized regulator value is not real."""


class ReconstructionFailed(DomainError):
    """No rational of bounded denominator lies within tolerance."""
