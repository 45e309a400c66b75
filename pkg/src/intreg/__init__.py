"""Regulators of higher Chow cycles: torsion, precycles and normal functions."""

from .errors import (ConvergenceError, DomainError, IntregError, NotTorsionCompatible, NumericError,
                     ParameterError, ParityError, ReconstructionFailed, UnsupportedCycleError)
from .numeric import ComplexValue
from .special import RootOfUnity, bernoulli_number, bernoulli_poly, polylog, polylog_oracle

__version__ = "0.1.0"

__all__ = [
    "ComplexValue", "ConvergenceError", "DomainError", "IntregError", "NotTorsionCompatible",
    "NumericError", "ParameterError", "ParityError", "ReconstructionFailed", "RootOfUnity",
    "UnsupportedCycleError", "bernoulli_number", "bernoulli_poly", "polylog", "polylog_oracle",
]
