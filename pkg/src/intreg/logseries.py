"""Exact truncated series in log(t) and t with coefficients in Q[i*pi].

The symbol ``ipi`` stands for i*pi and is never replaced by a number during
series manipulation, so statements like "the constant term is pi^2/2" are
exact: pi^2 is stored as -(ipi)^2.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping

from mpmath import mp, mpc

from .errors import ParameterError


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise ParameterError("floats are not exact; pass a Fraction or a 'p/q' string")
    return Fraction(x)


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _power_key(k: int) -> str:
    return "1" if k == 0 else "ipi" if k == 1 else f"ipi^{k}"


def _parse_power_key(key: str) -> int:
    if key == "1":
        return 0
    if key == "ipi":
        return 1
    if key.startswith("ipi^"):
        return int(key[4:])
    raise ParameterError(f"bad Q[ipi] monomial key {key!r}")


class PiCoefficient:
    """Element of Q[ipi] stored as {power: Fraction} without zero entries."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            if k < 0:
                raise ParameterError("negative powers of ipi are not in Q[ipi]")
            v = _frac(v)
            if v:
                clean[int(k)] = v
        self._terms = clean

    @classmethod
    def rational(cls, x) -> "PiCoefficient":
        return cls({0: x})

    @classmethod
    def ipi(cls, x=1, power: int = 1) -> "PiCoefficient":
        return cls({power: x})

    @classmethod
    def pi_squared(cls, x=1) -> "PiCoefficient":
        """x * pi^2 = -x * (ipi)^2."""
        return cls({2: -_frac(x)})

    @classmethod
    def coerce(cls, x) -> "PiCoefficient":
        return x if isinstance(x, PiCoefficient) else cls.rational(x)

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def __getitem__(self, power: int) -> Fraction:
        return self._terms.get(power, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def has_odd_powers(self) -> bool:
        return any(k % 2 for k in self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiCoefficient):
            try:
                other = PiCoefficient.rational(other)
            except (TypeError, ValueError, ParameterError):
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(sorted(self._terms.items())))

    def __add__(self, other) -> "PiCoefficient":
        other = PiCoefficient.coerce(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return PiCoefficient(out)

    __radd__ = __add__

    def __neg__(self) -> "PiCoefficient":
        return PiCoefficient({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "PiCoefficient":
        return self + (-PiCoefficient.coerce(other))

    def __rsub__(self, other) -> "PiCoefficient":
        return PiCoefficient.coerce(other) - self

    def __mul__(self, other) -> "PiCoefficient":
        if not isinstance(other, PiCoefficient):
            c = _frac(other)
            return PiCoefficient({k: c * v for k, v in self._terms.items()})
        out: dict[int, Fraction] = {}
        for a, u in self._terms.items():
            for b, v in other._terms.items():
                out[a + b] = out.get(a + b, 0) + u * v
        return PiCoefficient(out)

    __rmul__ = __mul__

    def divide_ipi(self, k: int = 1) -> "PiCoefficient":
        """Exact division by (ipi)^k; fails if a lower power is present."""
        if any(p < k for p in self._terms):
            raise ParameterError(f"{self} is not divisible by ipi^{k}")
        return PiCoefficient({p - k: v for p, v in self._terms.items()})

    def evaluate(self, dps: int = 30) -> mpc:
        with mp.workdps(dps):
            ipi = mpc(0, mp.pi)
            return sum((mpc(v.numerator) / v.denominator * ipi ** k for k, v in self._terms.items()), mpc(0))

    def to_json(self) -> dict[str, str]:
        return {_power_key(k): _frac_str(self._terms[k]) for k in sorted(self._terms)}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "PiCoefficient":
        return cls({_parse_power_key(k): Fraction(v) for k, v in data.items()})

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k in sorted(self._terms):
            v = _frac_str(self._terms[k])
            parts.append(v if k == 0 else f"{v}*{_power_key(k)}")
        return " + ".join(parts)


ZERO = PiCoefficient()


class LogSeries:
    """Finite sum of c[j][n] log(t)^j t^n, valid through t^N.

    Coefficients beyond t^N are unknown, not zero: arithmetic takes the
    minimum valid order and asking for a coefficient past it is an error.
    """

    __slots__ = ("_coeffs", "order")

    def __init__(self, coeffs: Mapping[tuple[int, int], object] | None = None, order: int = 0):
        if order < 0:
            raise ParameterError("truncation order must be nonnegative")
        self.order = int(order)
        clean = {}
        for (j, n), c in (coeffs or {}).items():
            if j < 0 or n < 0:
                raise ParameterError(f"monomial log^{j} t^{n} is outside the series ring")
            c = PiCoefficient.coerce(c)
            if c and n <= self.order:
                clean[(int(j), int(n))] = c
        self._coeffs = clean

    @classmethod
    def log(cls, order: int) -> "LogSeries":
        return cls({(1, 0): 1}, order)

    @classmethod
    def constant(cls, c, order: int) -> "LogSeries":
        return cls({(0, 0): c}, order)

    @property
    def max_log_power(self) -> int:
        return max((j for j, _ in self._coeffs), default=0)

    def items(self) -> Iterable[tuple[tuple[int, int], PiCoefficient]]:
        return sorted(self._coeffs.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def coeff(self, j: int, n: int) -> PiCoefficient:
        if n > self.order:
            raise ParameterError(f"t^{n} is past the valid order {self.order}")
        return self._coeffs.get((j, n), ZERO)

    def __getitem__(self, key: tuple[int, int]) -> PiCoefficient:
        return self.coeff(*key)

    def truncate(self, order: int) -> "LogSeries":
        if order > self.order:
            raise ParameterError(f"cannot extend a series valid through {self.order} to {order}")
        return LogSeries(self._coeffs, order)

    def __add__(self, other) -> "LogSeries":
        if not isinstance(other, LogSeries):
            other = LogSeries.constant(other, self.order)
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return LogSeries(out, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self) -> "LogSeries":
        return LogSeries({k: -v for k, v in self._coeffs.items()}, self.order)

    def __sub__(self, other) -> "LogSeries":
        return self + (-other)

    def __rsub__(self, other) -> "LogSeries":
        return (-self) + other

    def __mul__(self, other) -> "LogSeries":
        if not isinstance(other, LogSeries):
            c = PiCoefficient.coerce(other)
            return LogSeries({k: v * c for k, v in self._coeffs.items()}, self.order)
        order = min(self.order, other.order)
        out: dict[tuple[int, int], PiCoefficient] = {}
        for (j1, n1), u in self._coeffs.items():
            for (j2, n2), v in other._coeffs.items():
                n = n1 + n2
                if n > order:
                    continue
                key = (j1 + j2, n)
                out[key] = out.get(key, ZERO) + u * v
        return LogSeries(out, order)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LogSeries":
        """Multiply by t^k (k >= 0); the valid order grows by k."""
        if k < 0:
            raise ParameterError("negative shifts leave the series ring")
        return LogSeries({(j, n + k): v for (j, n), v in self._coeffs.items()}, self.order + k)

    def divide_ipi(self, k: int = 1) -> "LogSeries":
        return LogSeries({key: v.divide_ipi(k) for key, v in self._coeffs.items()}, self.order)

    def delta(self) -> "LogSeries":
        """t d/dt applied termwise."""
        out: dict[tuple[int, int], PiCoefficient] = {}
        for (j, n), v in self._coeffs.items():
            if n:
                out[(j, n)] = out.get((j, n), ZERO) + v * n
            if j:
                out[(j - 1, n)] = out.get((j - 1, n), ZERO) + v * j
        return LogSeries(out, self.order)

    def vanishes_through(self, order: int | None = None) -> bool:
        order = self.order if order is None else order
        if order > self.order:
            raise ParameterError(f"series is only valid through t^{self.order}")
        return all(n > order for _, n in self._coeffs)

    def has_odd_ipi_powers(self) -> bool:
        return any(v.has_odd_powers() for v in self._coeffs.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogSeries):
            return NotImplemented
        return self.order == other.order and self._coeffs == other._coeffs

    def agrees_with(self, other: "LogSeries", order: int | None = None) -> bool:
        """Coefficientwise equality through the common (or given) order."""
        order = min(self.order, other.order) if order is None else order
        return (self - other).vanishes_through(order)

    def evaluate(self, t, dps: int = 30) -> mpc:
        """Numeric value at t with the principal log; pi is substituted here only."""
        with mp.workdps(dps):
            t = mp.mpmathify(t)
            lt = mp.log(t)
            total = mpc(0)
            for (j, n), v in self._coeffs.items():
                total += v.evaluate(dps) * lt ** j * t ** n
            return total

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "terms": [{"j": j, "n": n, "coeff": v.to_json()} for (j, n), v in self.items()],
        }

    @classmethod
    def from_json(cls, data) -> "LogSeries":
        if isinstance(data, str):
            data = json.loads(data)
        coeffs = {(int(e["j"]), int(e["n"])): PiCoefficient.from_json(e["coeff"]) for e in data["terms"]}
        return cls(coeffs, int(data["order"]))

    def __repr__(self) -> str:
        parts = []
        for (j, n), v in self.items():
            mono = "".join([f" log^{j}(t)" if j > 1 else " log(t)" if j else "",
                            f" t^{n}" if n > 1 else " t" if n else ""])
            parts.append(f"({v}){mono}")
        return (" + ".join(parts) or "0") + f" + O(t^{self.order + 1})"
