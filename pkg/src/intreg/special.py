"""Bernoulli numbers and polynomials, polylogarithms at controlled precision.

Two independent routes to Li_r are provided:

* :func:`polylog` sums the defining series for small ``|z|`` and otherwise
  uses the expansion in ``mu = log z`` whose coefficients are zeta values
  (exact Bernoulli numbers for the non-positive arguments). On the unit
  circle the real part (even ``r``) or imaginary part (odd ``r``) is replaced
  by its Bernoulli-polynomial closed form.
* :func:`polylog_oracle` integrates ``-log(1-u)`` repeatedly against
  ``du/u`` along the straight segment ``[0, z]`` with adaptive Gauss-Kronrod.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from mpmath import mp, mpc, mpf

from .errors import ConvergenceError, DomainError, ParameterError
from .numeric import DEFAULT_PREC, ComplexValue, to_mpc, working_dps
from .quadrature import integrate

MAX_BERNOULLI_ORDER = 64
SERIES_TERM_CAP = 10**7
# Below this modulus the defining series is summed directly.
DIRECT_SERIES_RADIUS = mpf("0.5")


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n with B_1 = -1/2, from  sum_k binom(m+1, k) B_k = 0."""
    table = [Fraction(1)]
    for m in range(1, n + 1):
        if m > 1 and m % 2 == 1:
            table.append(Fraction(0))
            continue
        s = sum(comb(m + 1, k) * table[k] for k in range(m))
        table.append(-s / (m + 1))
    return tuple(table)


def _bernoulli(n: int) -> Fraction:
    return _bernoulli_table(n)[n]


def bernoulli_number(n: int, max_order: int = MAX_BERNOULLI_ORDER) -> Fraction:
    """Signed Bernoulli number B_n for even ``2 <= n <= max_order``."""
    if not isinstance(n, int) or n < 2 or n % 2 or n > max_order:
        raise ParameterError(f"bernoulli_number needs an even index in [2, {max_order}], got {n!r}")
    return _bernoulli(n)


def bernoulli_poly(r: int, x, max_order: int = MAX_BERNOULLI_ORDER) -> Fraction:
    """Exact value of the Bernoulli polynomial B_r at the rational ``x``."""
    if not isinstance(r, int) or not 1 <= r <= max_order:
        raise ParameterError(f"Bernoulli polynomial order must lie in [1, {max_order}], got {r!r}")
    x = Fraction(x)
    table = _bernoulli_table(r)
    return sum((comb(r, k) * table[k] * x ** (r - k) for k in range(r + 1)), Fraction(0))


@dataclass(frozen=True)
class RootOfUnity:
    """zeta_l^a = exp(2 pi i a / l) with the exponent reduced mod l."""

    order: int
    exponent: int = 1

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise ParameterError(f"root of unity order must be a positive integer, got {self.order!r}")
        object.__setattr__(self, "exponent", self.exponent % self.order)

    @property
    def turns(self) -> Fraction:
        """Argument as a fraction of a full turn, in [0, 1)."""
        return Fraction(self.exponent, self.order)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.exponent)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.order, self.exponent * k)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        n = self.order * other.order
        return RootOfUnity(n, self.exponent * other.order + other.exponent * self.order).reduced()

    def reduced(self) -> "RootOfUnity":
        t = self.turns
        return RootOfUnity(t.denominator, t.numerator)

    def value(self, dps: int | None = None) -> mpc:
        with mp.workdps(dps or mp.dps):
            return mp.expjpi(2 * mpf(self.exponent) / self.order)

    def as_complex_value(self, prec: int = DEFAULT_PREC) -> ComplexValue:
        dps = working_dps(prec)
        return ComplexValue(self.value(dps), mpf(10) ** (1 - dps), prec)


def zeta_int(n: int, dps: int) -> tuple[mpf, mpf]:
    """zeta(n) for an integer n >= 2, with an error bound.

    Even arguments come from the exact Bernoulli formula; odd ones from an
    Euler-Maclaurin tail correction after a short direct sum.
    """
    if n < 2:
        raise ParameterError("zeta_int needs n >= 2")
    with mp.workdps(dps + 10):
        if n % 2 == 0:
            b = _bernoulli(n)
            v = (-1) ** (n // 2 + 1) * (2 * mp.pi) ** n * mpf(b.numerator) / (2 * b.denominator * factorial(n))
            return v, abs(v) * mpf(10) ** (-dps)
        cut = max(10, dps)
        s = sum(mpf(k) ** -n for k in range(1, cut))
        big = mpf(cut)
        s += big ** (1 - n) / (n - 1) + big ** (-n) / 2
        eps = mpf(10) ** (-dps - 5)
        rising = mpf(n)  # n (n+1) ... (n + 2j - 2)
        for j in range(1, 10 * dps):
            b = _bernoulli(2 * j)
            term = mpf(b.numerator) / b.denominator / factorial(2 * j) * rising * big ** (-n - 2 * j + 1)
            s += term
            rising *= (n + 2 * j - 1) * (n + 2 * j)
            if abs(term) < eps:
                return s, 2 * abs(term) + abs(s) * mpf(10) ** (-dps - 5)
        raise ConvergenceError("Euler-Maclaurin tail did not converge", partial=s)


def _zeta_nonpositive(n: int) -> Fraction:
    """zeta(-n) = (-1)^n B_{n+1} / (n+1) for n >= 0."""
    return (-1) ** n * _bernoulli(n + 1) / (n + 1)


def _direct_series(r: int, z: mpc, dps: int) -> tuple[mpc, mpf]:
    rho = abs(z)
    eps = mpf(10) ** (-dps)
    total = mpc(0)
    mag = mpf(0)
    power = mpc(1)
    for k in range(1, SERIES_TERM_CAP + 1):
        power *= z
        term = power / mpf(k) ** r
        total += term
        mag += abs(term)
        tail = rho ** (k + 1) / mpf(k + 1) ** r / (1 - rho)
        if tail < eps * max(abs(total), mpf(1)) * mpf("1e-3"):
            return total, tail + mag * mpf(10) ** (1 - dps) * k
    raise ConvergenceError("polylog series exceeded the term cap", partial=total)


def _log_expansion(r: int, z: mpc, dps: int) -> tuple[mpc, mpf]:
    """Li_r(z) = sum_{k != r-1} zeta(r-k) mu^k/k! + mu^{r-1}/(r-1)! (H_{r-1} - log(-mu))."""
    mu = mp.log(z)
    q = abs(mu) / (2 * mp.pi)
    if q >= mpf("0.9"):
        raise DomainError("log-expansion of Li_r used outside |log z| < 2 pi")
    eps = mpf(10) ** (-dps)
    total = mpc(0)
    mag = mpf(0)
    err = mpf(0)
    for k in range(r - 1):
        zv, ze = zeta_int(r - k, dps)
        c = mu ** k / factorial(k)
        total += zv * c
        mag += abs(zv * c)
        err += ze * abs(c)
    if mu != 0:
        harmonic = sum(mpf(1) / j for j in range(1, r))
        special = mu ** (r - 1) / factorial(r - 1) * (harmonic - mp.log(-mu))
        total += special
        mag += abs(special)
    elif r == 1:
        raise DomainError("Li_1 diverges at z = 1")
    # |zeta(-n)| |mu|^(n+r) / (n+r)! <= 2 zeta(2) (2 pi)^(r-1) q^(n+r)
    bound_c = mp.pi ** 2 / 3 * (2 * mp.pi) ** (r - 1)
    k = r
    while True:
        zn = _zeta_nonpositive(k - r)
        if zn:
            c = mpf(zn.numerator) / zn.denominator * mu ** k / factorial(k)
            total += c
            mag += abs(c)
        tail = bound_c * q ** (k + 1) / (1 - q)
        if tail < eps * mpf("1e-3") * max(abs(total), mpf(1)):
            break
        k += 1
        if k > SERIES_TERM_CAP:
            raise ConvergenceError("polylog log-expansion exceeded the term cap", partial=total)
    return total, err + tail + mag * mpf(10) ** (1 - dps) * k


def _unit_circle_part(r: int, turns, dps: int) -> mpf:
    """Closed form of Re Li_r (r even) or Im Li_r (r odd) at exp(2 pi i turns).

    sum cos(k th)/k^{2m}   = (-1)^{m-1} (2pi)^{2m}   B_{2m}(x)   / (2 (2m)!)
    sum sin(k th)/k^{2m+1} = (-1)^{m-1} (2pi)^{2m+1} B_{2m+1}(x) / (2 (2m+1)!)
    with x = th / 2pi in [0, 1].
    """
    m = r // 2
    sign = -1 if m % 2 == 0 else 1  # (-1)^(m-1)
    with mp.workdps(dps):
        if isinstance(turns, Fraction):
            b = bernoulli_poly(r, turns, max_order=max(r, MAX_BERNOULLI_ORDER))
            bval = mpf(b.numerator) / b.denominator
        else:
            table = _bernoulli_table(r)
            bval = sum(comb(r, k) * mpf(table[k].numerator) / table[k].denominator * turns ** (r - k)
                       for k in range(r + 1))
        return sign * (2 * mp.pi) ** r * bval / (2 * factorial(r))


def _polylog_raw(r: int, z: mpc, dps: int, turns=None) -> tuple[mpc, mpf]:
    """Core evaluation; ``turns`` (in [0, 1)) marks a point on the unit circle."""
    if z == 0:
        return mpc(0), mpf(0)
    if r == 1:
        if z == 1:
            raise DomainError("Li_1 diverges at z = 1")
        v = -mp.log(1 - z)
        return v, abs(v) * mpf(10) ** (1 - dps)
    if z.imag < 0:
        v, e = _polylog_raw(r, z.conjugate(), dps, None if turns is None else (1 - turns) % 1)
        return v.conjugate(), e
    if abs(z) <= DIRECT_SERIES_RADIUS:
        v, e = _direct_series(r, z, dps)
    else:
        v, e = _log_expansion(r, z, dps)
    if z.imag == 0:
        v = mpc(v.real, 0)
    if turns is not None and turns != 0:
        closed = _unit_circle_part(r, turns, dps)
        v = mpc(closed, v.imag) if r % 2 == 0 else mpc(v.real, closed)
    return v, e


def _derivative_bound(r: int, z: mpc, dps: int) -> mpf:
    """Upper bound for |d Li_r/dz| = |Li_{r-1}(z)/z| near ``z``."""
    rho = min(abs(z), mpf(1))
    if r >= 3:
        return zeta_int(r - 1, dps)[0]
    if r == 2:
        gap = abs(1 - z)
        return (abs(mp.log(gap)) + mp.pi) / max(rho, mpf("0.5")) + 1
    return 1 / abs(1 - z)


def _coerce_argument(z, prec: int):
    """Return (mpc value, input error, turns on the unit circle or None)."""
    dps = working_dps(prec)
    with mp.workdps(dps):
        if isinstance(z, RootOfUnity):
            return z.value(dps), mpf(0), z.turns
        if isinstance(z, ComplexValue):
            v, e = z.value, z.err
        else:
            v, e = to_mpc(z), mpf(0)
        turns = None
        if v != 0 and abs(abs(v) - 1) <= mpf(10) ** (2 - dps):
            turns = (mp.arg(v) / (2 * mp.pi)) % 1
        return v, e, turns


def polylog(r: int, z, prec: int = DEFAULT_PREC) -> ComplexValue:
    """Li_r(z) = sum_{k>=1} z^k/k^r for |z| <= 1 as a :class:`ComplexValue`.

    ``z`` may be a number, a ``ComplexValue`` (its error is propagated) or a
    :class:`RootOfUnity` (whose argument is then known exactly).
    """
    if not isinstance(r, int) or r < 1:
        raise ParameterError(f"polylog order must be a positive integer, got {r!r}")
    if isinstance(z, RootOfUnity):
        value, err = _polylog_root_of_unity(r, z.order, z.exponent, prec)
        return ComplexValue(value, err, prec)
    return _polylog_generic(r, z, prec)


@lru_cache(maxsize=4096)
def _polylog_root_of_unity(r: int, order: int, exponent: int, prec: int) -> tuple[mpc, mpf]:
    # Torsion sums revisit the same few roots of unity many times.
    v = _polylog_generic(r, RootOfUnity(order, exponent), prec)
    return v.value, v.err


def _polylog_generic(r: int, z, prec: int) -> ComplexValue:
    dps = working_dps(prec)
    v, e_in, turns = _coerce_argument(z, prec)
    with mp.workdps(dps):
        if abs(v) > 1 + mpf(10) ** (2 - dps):
            raise DomainError("polylog is only evaluated for |z| <= 1")
        if r == 1 and abs(v - 1) <= e_in:
            raise DomainError("Li_1 diverges at z = 1")
        value, err = _polylog_raw(r, v, dps, turns)
        if e_in:
            err += e_in * _derivative_bound(r, v, dps)
        return ComplexValue(value, err, prec)


def polylog_oracle(r: int, z, prec: int = DEFAULT_PREC, tol=None) -> ComplexValue:
    """Li_r(z) by quadrature along the segment [0, z], independent of :func:`polylog`.

    Nesting Li_r(z) = int_0^z Li_{r-1}(u) du/u down to Li_1 = -log(1-u) and
    writing u = s z collapses the repeated integral to one kernel,

        Li_r(z) = 1/(r-2)! int_0^1 log(1/s)^{r-2} (-log(1 - s z)) ds/s,

    which is integrated adaptively; breakpoints cluster near s = 1 when z is
    close to the logarithmic singularity.
    """
    if not isinstance(r, int) or r < 1:
        raise ParameterError(f"polylog order must be a positive integer, got {r!r}")
    dps = working_dps(prec)
    v, _, _ = _coerce_argument(z, prec)
    with mp.workdps(dps):
        if v.imag == 0 and v.real > 1:
            raise DomainError("segment [0, z] crosses the branch cut [1, inf)")
        if r == 1:
            if v == 1:
                raise DomainError("Li_1 diverges at z = 1")
            val = -mp.log(1 - v)
            return ComplexValue(val, abs(val) * mpf(10) ** (1 - dps), prec)
        if v == 0:
            return ComplexValue(mpc(0), mpf(0), prec)
        tol = mpf(10) ** (-(2 * prec) // 3) if tol is None else mpf(tol)
        norm = factorial(r - 2)

        def integrand(s):
            kern = -mp.log1p(-s * v) / s
            if r > 2:
                kern *= (-mp.log(s)) ** (r - 2)
            return kern / norm

        points = [mpf(0)]
        gap = abs(1 - v)
        if gap < mpf("0.25"):
            points += [1 - 4 * gap, 1 - gap, 1 - gap / 4]
        points.append(mpf(1))
        res = integrate(integrand, points, abs_tol=tol, dps=dps, limit=20000)
        return ComplexValue(mpc(res.value), res.error + mpf(10) ** (2 - dps), prec)


def dirichlet_L_chi4_at_2(prec: int = DEFAULT_PREC) -> ComplexValue:
    """Catalan's constant G = L(chi_4, 2) = sum_k (-1)^k / (2k+1)^2.

    Uses the Cohen-Rodriguez Villegas-Zagier acceleration; since 1/(2k+1)^2
    is a moment sequence of a positive measure of mass 1, the error after n
    steps is at most 2 / (3 + sqrt 8)^n.
    """
    dps = working_dps(prec)
    with mp.workdps(dps + 10):
        n = int(dps * mp.log(10) / mp.log(3 + mp.sqrt(8))) + 2
        d = (3 + mp.sqrt(8)) ** n
        d = (d + 1 / d) / 2
        b = mpf(-1)
        c = -d
        s = mpf(0)
        for k in range(n):
            c = b - c
            s += c / mpf(2 * k + 1) ** 2
            b = (k + n) * (k - n) * b / ((k + mpf(1) / 2) * (k + 1))
        value = s / d
        err = 2 / (3 + mp.sqrt(8)) ** n + abs(value) * mpf(10) ** (-dps)
    with mp.workdps(dps):
        return ComplexValue(mpc(+value), +err, prec)
