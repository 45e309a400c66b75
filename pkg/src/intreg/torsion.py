"""Torsion orders of regulator values of the cyclotomic cycle catalog.

A catalog cycle Z^r_{l,a} in CH^r(Q(zeta_l), 2r-1) has regulator
(r-1)! l^(r-1) Li_r(zeta_l^a). For a parity-respecting combination the value
divided by (2 pi i)^r is rational and its denominator is the torsion order.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd

from mpmath import mp, mpc, mpf

from .errors import (NotTorsionCompatible, NumericError, ParameterError,
                     ParityError, ReconstructionFailed, UnsupportedCycleError)
from .numeric import DEFAULT_PREC, ComplexValue, working_dps
from .quadrature import integrate
from .special import RootOfUnity, bernoulli_poly, dirichlet_L_chi4_at_2, polylog

CATALOG_ORDERS = (2, 3, 4)
MAX_W_ORDER = 16
MAX_RECONSTRUCTION_DENOMINATOR = 10**6

# Sign s in  sum f(a) Li_r(zeta^a) = s (2 pi i)^r / (2 r!) sum f(a) B_r(a/l).
# Fixed by calibrate_fourier_sign(); the identity is often quoted with s = +1.
FOURIER_SIGN = -1


@dataclass(frozen=True)
class CycleTerm:
    """``coeff`` times the catalog cycle Z^r_{l,a}."""

    r: int
    l: int
    a: int
    coeff: int = 1

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 1:
            raise ParameterError(f"cycle degree r must be a positive integer, got {self.r!r}")
        if not isinstance(self.l, int) or self.l < 1:
            raise ParameterError(f"cycle level l must be a positive integer, got {self.l!r}")
        object.__setattr__(self, "a", self.a % self.l)

    def to_json(self) -> dict:
        return {"r": self.r, "l": self.l, "a": self.a, "c": self.coeff}


@dataclass(frozen=True)
class CycleCombination:
    """Formal integer combination of catalog cycles sharing the degree ``r``.

    For every level l present, f(a) = total coefficient of Z^r_{l,a} must
    satisfy f(-a mod l) = (-1)^r f(a).
    """

    r: int
    terms: tuple[CycleTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        for t in terms:
            if t.r != self.r:
                raise ParameterError(f"term {t} has r={t.r}, combination has r={self.r}")
        sign = (-1) ** self.r
        for l, f in self.coefficients().items():
            for a, c in f.items():
                if f.get((-a) % l, 0) != sign * c:
                    raise ParityError(
                        f"parity violated at l={l}, a={a}: f(-a) must equal {sign:+d} * f(a)")

    @classmethod
    def of(cls, r: int, *triples) -> "CycleCombination":
        """Build from ``(l, a, coeff)`` triples."""
        return cls(r, tuple(CycleTerm(r, l, a, c) for l, a, c in triples))

    def coefficients(self) -> dict[int, dict[int, int]]:
        """l -> {a: f(a)} with zero coefficients dropped."""
        out: dict[int, dict[int, int]] = defaultdict(dict)
        for t in self.terms:
            out[t.l][t.a] = out[t.l].get(t.a, 0) + t.coeff
        return {l: {a: c for a, c in f.items() if c} for l, f in out.items()}

    def levels(self) -> list[int]:
        return sorted(self.coefficients())

    def negated_exponents(self) -> "CycleCombination":
        return CycleCombination(self.r, tuple(CycleTerm(t.r, t.l, -t.a, t.coeff) for t in self.terms))

    def to_json(self) -> list[dict]:
        return [t.to_json() for t in self.terms]

    @classmethod
    def from_json(cls, data) -> "CycleCombination":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, list) or not data:
            raise ParameterError("a cycle combination is a non-empty JSON list of {r, l, a, c}")
        try:
            terms = [CycleTerm(int(d["r"]), int(d["l"]), int(d["a"]), int(d.get("c", 1))) for d in data]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"malformed cycle term: {exc}") from exc
        return cls(terms[0].r, tuple(terms))


# --- exact side -----------------------------------------------------------

def tau(z: CycleCombination) -> Fraction:
    """|sum coeff l^(r-1)/(2r) B_r(a/l)| over all terms, exactly."""
    r = z.r
    total = Fraction(0)
    for t in z.terms:
        total += t.coeff * Fraction(t.l ** (r - 1), 2 * r) * bernoulli_poly(r, Fraction(t.a, t.l))
    return abs(total)


def torsion_order(value: Fraction) -> int:
    """Denominator in lowest terms; zero has order 1."""
    return Fraction(value).denominator


# --- numeric side ---------------------------------------------------------

def catalog_regulator(term: CycleTerm, prec: int = DEFAULT_PREC) -> ComplexValue:
    """coeff (r-1)! l^(r-1) Li_r(zeta_l^a) for r in the catalog range."""
    if term.r not in CATALOG_ORDERS:
        raise UnsupportedCycleError(f"no catalog cycle for r={term.r}; supported: {CATALOG_ORDERS}")
    li = polylog(term.r, RootOfUnity(term.l, term.a), prec)
    return li * (term.coeff * factorial(term.r - 1) * term.l ** (term.r - 1))


def combination_regulator(z: CycleCombination, prec: int = DEFAULT_PREC) -> ComplexValue:
    total = ComplexValue.exact(0, prec)
    for t in z.terms:
        total = total + catalog_regulator(t, prec)
    return total


def _fourier_sides(z: CycleCombination, prec: int) -> tuple[ComplexValue, ComplexValue]:
    levels = z.levels()
    if len(levels) > 1:
        raise ParameterError("the Fourier identity is stated for a single level l")
    r = z.r
    lhs = ComplexValue.exact(0, prec)
    bsum = Fraction(0)
    for l, f in z.coefficients().items():
        for a, c in f.items():
            lhs = lhs + polylog(r, RootOfUnity(l, a), prec) * c
            bsum += c * bernoulli_poly(r, Fraction(a, l))
    with mp.workdps(working_dps(prec)):
        scale = (2j * mp.pi) ** r / (2 * factorial(r)) * mpf(bsum.numerator) / bsum.denominator
        rhs = ComplexValue(mpc(scale), abs(scale) * mpf(10) ** (1 - working_dps(prec)), prec)
    return lhs, rhs


def calibrate_fourier_sign(prec: int = DEFAULT_PREC) -> int:
    """Determine the sign in the Fourier/Bernoulli identity numerically.

    Uses f = delta_0 at l = 1 for r = 2 and f = delta_1 - delta_2 at l = 3
    for r = 3; both must agree.
    """
    signs = set()
    for z in (CycleCombination.of(2, (1, 0, 1)), CycleCombination.of(3, (3, 1, 1), (3, 2, -1))):
        lhs, rhs = _fourier_sides(z, prec)
        if (lhs - rhs).close_to(0, 0):
            signs.add(1)
        elif (lhs + rhs).close_to(0, 0):
            signs.add(-1)
        else:
            raise NumericError("Fourier identity matches neither sign")
    if len(signs) != 1:
        raise NumericError("calibration runs disagree on the sign")
    return signs.pop()


def verify_fourier_identity(z: CycleCombination, prec: int = DEFAULT_PREC) -> ComplexValue:
    """Residual  sum f(a) Li_r(zeta^a) - s (2 pi i)^r/(2 r!) sum f(a) B_r(a/l)."""
    if not z.terms:
        return ComplexValue.exact(0, prec)
    lhs, rhs = _fourier_sides(z, prec)
    return lhs - rhs * FOURIER_SIGN


def _continued_fraction_convergents(x: Fraction):
    p0, q0, p1, q1 = 0, 1, 1, 0
    while True:
        a = x.numerator // x.denominator
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield Fraction(p1, q1)
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def _exact(x) -> Fraction:
    """The binary floating value of ``x`` as an exact Fraction."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    sign, man, exp, _ = mpf(x)._mpf_
    value = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -value if sign else value


def reconstruct_rational(x, max_den: int, tol) -> Fraction:
    """Continued-fraction reconstruction of a real ``x`` with a stability margin.

    The last convergent p/q with q <= max_den is accepted only when it lies
    within ``tol`` of ``x`` and the following convergent has denominator
    above 10*max_den (or ``x`` equals p/q).
    """
    exact = _exact(x)
    best = following = None
    for conv in _continued_fraction_convergents(exact):
        if conv.denominator > max_den:
            following = conv
            break
        best = conv
    if best is None:
        raise ReconstructionFailed("no convergent within the denominator bound")
    if abs(exact - best) >= _exact(tol):
        raise ReconstructionFailed(f"nearest convergent {best} is farther than tol from {mp.nstr(x, 20)}")
    if following is not None and following.denominator <= 10 * max_den:
        raise ReconstructionFailed(f"unstable reconstruction: next convergent {following} is too close")
    return best


@dataclass(frozen=True)
class TorsionResult:
    tau: Fraction
    order: int
    numeric_check: ComplexValue | None = None

    def to_json(self) -> dict:
        out = {"tau": f"{self.tau.numerator}/{self.tau.denominator}", "order": self.order}
        if self.numeric_check is not None:
            out["numeric_check"] = self.numeric_check.to_json()
        return out


def detect_torsion(value, r: int, max_den: int = MAX_RECONSTRUCTION_DENOMINATOR,
                   tol=mpf("1e-15")) -> TorsionResult:
    """Recover tau = |value / (2 pi i)^r| as an exact rational.

    ``numeric_check`` of the result holds the residual value/(2 pi i)^r - (+-tau).
    """
    if max_den > MAX_RECONSTRUCTION_DENOMINATOR:
        raise ParameterError(f"max_den must not exceed {MAX_RECONSTRUCTION_DENOMINATOR}")
    value = ComplexValue.coerce(value)
    dps = working_dps(value.prec)
    with mp.workdps(dps):
        period = (2j * mp.pi) ** r
        ratio = value.value / period
        ratio_err = value.err / abs(period)
        if abs(ratio.imag) > tol + ratio_err:
            raise NotTorsionCompatible(
                f"value/(2 pi i)^{r} has imaginary part {mp.nstr(ratio.imag, 5)}; not torsion-compatible")
        q = reconstruct_rational(ratio.real, max_den, tol)
        resid = ComplexValue(ratio - mpf(q.numerator) / q.denominator, ratio_err, value.prec)
    t = abs(q)
    return TorsionResult(t, torsion_order(t), resid)


def torsion_report(z: CycleCombination, prec: int = DEFAULT_PREC) -> TorsionResult:
    """Exact tau/order with the detected-from-regulator residual attached."""
    t = tau(z)
    numeric = detect_torsion(combination_regulator(z, prec), z.r)
    if numeric.tau != t:
        raise NumericError(f"numeric reconstruction {numeric.tau} disagrees with exact tau {t}")
    return TorsionResult(t, torsion_order(t), numeric.numeric_check)


# --- the Gaussian-field example -------------------------------------------

def gaussian_example_regulator(prec: int = DEFAULT_PREC) -> ComplexValue:
    """64 i L(chi_4, 2), cross-checked against 32 (Li_2(i) - Li_2(-i))."""
    g = dirichlet_L_chi4_at_2(prec)
    value = g * ComplexValue.exact(64j, prec)
    check = (polylog(2, RootOfUnity(4, 1), prec) - polylog(2, RootOfUnity(4, 3), prec)) * 32
    if not value.close_to(check, 0):
        raise NumericError("chi_4 series and Li_2(i) routes disagree")
    return value


def gaussian_quadrature_route(prec: int = DEFAULT_PREC) -> ComplexValue:
    """Regulator of Z_- - Z_+ from its contour integrals.

    Z_+ contributes 8 int_{-i}^{i} (log(1-z) - log(1+z)) dz/z; inverting all
    coordinates negates R_3, so Z_- contributes the opposite and the total is
    -2 times the Z_+ integral. The segment z = i s is split at s = 0 where
    the integrand is regular but undefined in floating point.
    """
    dps = working_dps(prec)
    with mp.workdps(dps):
        def integrand(s):
            z = mpc(0, s)
            return (mp.log(1 - z) - mp.log(1 + z)) / s

        res = integrate(integrand, [-1, 0, 1], abs_tol=mpf(10) ** (-prec), dps=dps)
        z_plus = 8 * res.value
        return ComplexValue(-2 * z_plus, 16 * res.error, prec)


# --- w_r(k) ---------------------------------------------------------------

def _is_squarefree(d: int) -> bool:
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def kronecker_symbol(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for n >= 1."""
    if n <= 0:
        raise ParameterError("kronecker_symbol needs n >= 1")
    result = 1
    while n % 2 == 0:
        n //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            result = -result
    # Jacobi symbol (d/n), n odd
    a = d % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


class FieldSpec:
    """A number field k with an explicit description of Gal(k(zeta_m)/k)."""

    degree: int = 1

    def galois_image(self, m: int) -> list[int]:
        """Residues a in (Z/m)^* whose automorphism of Q(zeta_m) fixes k."""
        raise NotImplementedError

    @staticmethod
    def parse(text: str) -> "FieldSpec":
        """``Q``, ``sqrt:d`` or ``zeta:n``."""
        text = text.strip()
        if text in ("Q", "QQ", "rationals"):
            return Rationals()
        kind, _, arg = text.partition(":")
        try:
            value = int(arg)
        except ValueError as exc:
            raise ParameterError(f"cannot parse field {text!r}") from exc
        if kind == "sqrt":
            return RealQuadratic(value)
        if kind == "zeta":
            return Cyclotomic(value)
        raise ParameterError(f"unknown field variant {kind!r}")


def _units(m: int) -> list[int]:
    return [a for a in range(1, m + 1) if gcd(a, m) == 1]


@dataclass(frozen=True)
class Rationals(FieldSpec):
    degree = 1

    def galois_image(self, m: int) -> list[int]:
        return _units(m)

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class RealQuadratic(FieldSpec):
    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d <= 1 or not _is_squarefree(self.d):
            raise ParameterError(f"Q(sqrt d) needs a squarefree integer d > 1, got {self.d!r}")

    @property
    def degree(self) -> int:
        return 2

    @property
    def discriminant(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    def galois_image(self, m: int) -> list[int]:
        disc = self.discriminant
        units = _units(m)
        if m % disc:
            return units
        return [a for a in units if kronecker_symbol(disc, a) == 1]

    def __str__(self):
        return f"Q(sqrt {self.d})"


@dataclass(frozen=True)
class Cyclotomic(FieldSpec):
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise ParameterError(f"Q(zeta_n) needs n >= 3, got {self.n!r}")

    @property
    def degree(self) -> int:
        return _euler_phi(self.n)

    def galois_image(self, m: int) -> list[int]:
        g = gcd(m, self.n)
        return [a for a in _units(m) if (a - 1) % g == 0]

    def __str__(self):
        return f"Q(zeta_{self.n})"


def _primes_upto(n: int) -> list[int]:
    sieve = [True] * (n + 1)
    sieve[:2] = [False, False][: n + 1]
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = [False] * len(sieve[p * p::p])
    return [p for p, ok in enumerate(sieve) if ok]


def w_condition(r: int, k: FieldSpec, m: int) -> bool:
    """a^r = 1 (mod m) for every a in the Galois image H_m(k)."""
    return all(pow(a, r, m) == 1 % m for a in k.galois_image(m))


def w(r: int, k: FieldSpec) -> int:
    """w_r(k), the order of the Galois invariants of mu_infinity^{(x) r}.

    Computed prime by prime: the invariants decompose into q-primary parts,
    and q^e is admissible iff a^r = 1 mod q^e on H_{q^e}(k). Only prime
    powers with phi(q^e) <= 4 r [k:Q] can be admissible.
    """
    if not isinstance(r, int) or not 1 <= r <= MAX_W_ORDER:
        raise ParameterError(f"w_r needs 1 <= r <= {MAX_W_ORDER}, got {r!r}")
    if not isinstance(k, (Rationals, RealQuadratic, Cyclotomic)):
        raise ParameterError(f"unsupported field {k!r}")
    bound = 4 * r * k.degree
    result = 1
    for q in _primes_upto(bound + 1):
        best, qe = 1, q
        while _euler_phi(qe) <= bound:
            if w_condition(r, k, qe):
                best = qe
            qe *= q
        result *= best
    return result
