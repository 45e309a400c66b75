"""Extended-precision complex values with a tracked absolute error bound."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

DEFAULT_PREC = 30
# Extra decimal digits carried internally above the requested precision.
GUARD_DIGITS = 15


def working_dps(prec: int) -> int:
    return prec + GUARD_DIGITS


def to_mpc(x) -> mpc:
    """Convert ints, Fractions, floats, complex and mpmath numbers to ``mpc``."""
    if isinstance(x, ComplexValue):
        return x.value
    if isinstance(x, Fraction):
        return mpc(mpf(x.numerator) / x.denominator)
    if isinstance(x, tuple) and len(x) == 2:
        return mpc(to_mpc(x[0]).real, to_mpc(x[1]).real)
    return mpc(x)


def rounding_bound(magnitude, dps: int) -> mpf:
    return abs(magnitude) * mpf(10) ** (1 - dps)


@dataclass(frozen=True)
class ComplexValue:
    """A complex number together with an upper bound on its absolute error.

    ``prec`` is the requested number of significant decimal digits. Arithmetic
    between values propagates ``err`` additively (first order plus the product
    of errors) and adds a rounding term at the working precision.
    """

    value: mpc
    err: mpf
    prec: int = DEFAULT_PREC

    @classmethod
    def exact(cls, x, prec: int = DEFAULT_PREC) -> "ComplexValue":
        with mp.workdps(working_dps(prec)):
            return cls(to_mpc(x), mpf(0), prec)

    @classmethod
    def coerce(cls, x, prec: int = DEFAULT_PREC) -> "ComplexValue":
        if isinstance(x, ComplexValue):
            return x
        return cls.exact(x, prec)

    @property
    def re(self) -> mpf:
        return self.value.real

    @property
    def im(self) -> mpf:
        return self.value.imag

    def _prec_with(self, other: "ComplexValue") -> int:
        return max(self.prec, other.prec)

    def __add__(self, other):
        other = ComplexValue.coerce(other, self.prec)
        prec = self._prec_with(other)
        dps = working_dps(prec)
        with mp.workdps(dps):
            v = self.value + other.value
            err = self.err + other.err + rounding_bound(v, dps)
        return ComplexValue(v, err, prec)

    __radd__ = __add__

    def __neg__(self):
        with mp.workdps(working_dps(self.prec)):
            return ComplexValue(-self.value, self.err, self.prec)

    def __sub__(self, other):
        return self + (-ComplexValue.coerce(other, self.prec))

    def __rsub__(self, other):
        return ComplexValue.coerce(other, self.prec) - self

    def __mul__(self, other):
        other = ComplexValue.coerce(other, self.prec)
        prec = self._prec_with(other)
        dps = working_dps(prec)
        with mp.workdps(dps):
            v = self.value * other.value
            err = (abs(self.value) * other.err + abs(other.value) * self.err
                   + self.err * other.err + rounding_bound(v, dps))
        return ComplexValue(v, err, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ComplexValue.coerce(other, self.prec)
        prec = self._prec_with(other)
        dps = working_dps(prec)
        with mp.workdps(dps):
            d = abs(other.value)
            if d <= other.err:
                raise ZeroDivisionError("divisor is indistinguishable from zero")
            v = self.value / other.value
            err = ((self.err + abs(v) * other.err) / (d - other.err)
                   + rounding_bound(v, dps))
        return ComplexValue(v, err, prec)

    def conjugate(self) -> "ComplexValue":
        with mp.workdps(working_dps(self.prec)):
            return ComplexValue(self.value.conjugate(), self.err, self.prec)

    def __abs__(self) -> mpf:
        return abs(self.value)

    def close_to(self, other, tol) -> bool:
        """True when the values agree within ``tol`` plus both error bounds."""
        other = ComplexValue.coerce(other, self.prec)
        with mp.workdps(working_dps(self._prec_with(other))):
            return abs(self.value - other.value) <= mpf(tol) + self.err + other.err

    def __complex__(self) -> complex:
        return complex(self.value)

    def __repr__(self) -> str:
        with mp.workdps(self.prec):
            return f"ComplexValue({mp.nstr(self.value, self.prec)} ± {mp.nstr(self.err, 3)})"

    def to_json(self) -> dict:
        with mp.workdps(self.prec):
            return {
                "re": mp.nstr(self.re, self.prec),
                "im": mp.nstr(self.im, self.prec),
                "err": mp.nstr(self.err, 5),
                "prec": self.prec,
            }
