"""Face intersections, boundaries and normalization of curves in the cube.

A precycle here is a curve in (P^1 - {1})^n parametrized by t in P^1,
given by n rational functions z_i(t). Its intersection with the face
{z_i = 0} (resp. {z_i = inf}) consists of the zeros (resp. poles) of z_i,
including t = inf by degree balance. An intersection is degenerate when
some other coordinate equals 1 there, since that point is not in the cube.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from mpmath import mp, mpc, mpf

from .errors import NumericError, ParameterError
from .numeric import DEFAULT_PREC, to_mpc, working_dps
from .special import RootOfUnity

INF = mp.inf
FACE_ZERO = "0"
FACE_INF = "inf"


def is_infinite(v) -> bool:
    return v is INF or (not isinstance(v, mpc) and v == INF)


def _tol(prec: int) -> mpf:
    return mpf(10) ** (-(prec // 2))


def parse_coefficient(c, dps: int) -> mpc:
    """Accepts numbers, "p/q" strings, [re, im] pairs and {"zeta": [l, a], "c": ...}."""
    with mp.workdps(dps):
        if isinstance(c, dict):
            if "zeta" not in c:
                raise ParameterError(f"unknown coefficient object {c!r}")
            l, a = c["zeta"]
            return RootOfUnity(int(l), int(a)).value(dps) * parse_coefficient(c.get("c", 1), dps)
        if isinstance(c, RootOfUnity):
            return c.value(dps)
        if isinstance(c, str):
            return mpc(to_mpc(Fraction(c)))
        if isinstance(c, list):
            if len(c) != 2:
                raise ParameterError(f"complex coefficient must be [re, im], got {c!r}")
            return mpc(parse_coefficient(c[0], dps).real, parse_coefficient(c[1], dps).real)
        return to_mpc(c)


# --- univariate polynomial helpers (ascending coefficient lists) ---------

def _trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(p: Sequence, q: Sequence) -> list:
    out = [mpc(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_add(p: Sequence, q: Sequence) -> list:
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def poly_pow(p: Sequence, k: int) -> list:
    out = [mpc(1)]
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def _cluster(roots: list, tol, dps: int) -> list[tuple[mpc, int]]:
    """Group roots into (centroid, multiplicity).

    An m-fold root of a polynomial with coefficients rounded at ``dps``
    digits splits into m roots at distance about 10^(-dps/m), while their
    centroid stays accurate, so the merge radius widens with cluster size.
    """
    groups: list[list] = []
    for r in roots:
        for g in groups:
            centre = sum(g) / len(g)
            radius = max(tol, mpf(10) ** (-(dps - 10) / (len(g) + 1))) * max(1, abs(centre))
            if abs(centre - r) < radius:
                g.append(r)
                break
        else:
            groups.append([r])
    return [(sum(g) / len(g), len(g)) for g in groups]


def _seed_roots(core: Sequence[mpc]) -> list[complex]:
    """Durand-Kerner in double precision; only a starting point for polishing."""
    c = [complex(x) for x in core]
    n = len(c) - 1
    c = [x / c[-1] for x in c]
    radius = 1 + max(abs(x) for x in c[:-1])
    z = [radius * (0.4 + 0.9j) ** k for k in range(n)]

    def p(x):
        acc = 0j
        for coef in reversed(c):
            acc = acc * x + coef
        return acc

    for _ in range(3000):
        moved = 0.0
        for i in range(n):
            den = 1 + 0j
            for j in range(n):
                if j != i:
                    den *= z[i] - z[j]
            if den == 0:
                den = 1e-300
            step = p(z[i]) / den
            z[i] -= step
            moved = max(moved, abs(step))
        if moved < 1e-15 * radius:
            break
    return z


def _polish(core: Sequence[mpc], seed, dps: int, max_iter: int = 200) -> mpc:
    """Newton on p/p', which has only simple roots, so multiple roots converge fast.

    Stops once |p(x)| is at the rounding level of Horner evaluation; past
    that point the step is noise.
    """
    desc = list(reversed(core))
    d1 = list(reversed([k * c for k, c in enumerate(core)][1:]))
    d2 = list(reversed([k * (k + 1) * c for k, c in enumerate(core[1:])][1:]))
    absc = [abs(c) for c in desc]
    eps = mpf(10) ** (-dps + 2)
    x = mpc(seed)
    last = None
    for _ in range(max_iter):
        p = mp.polyval(desc, x)
        if abs(p) <= eps * mp.polyval(absc, abs(x)):
            return x
        p1 = mp.polyval(d1, x)
        p2 = mp.polyval(d2, x) if d2 else mpc(0)
        den = p1 * p1 - p * p2
        if den == 0:
            return x
        step = p * p1 / den
        if last is not None and abs(step) > 2 * last:
            return x
        x -= step
        last = abs(step)
        if last <= eps * max(1, abs(x)):
            return x
    return x


def _roots_with_multiplicity(coeffs: Sequence[mpc], prec: int, index=None) -> tuple[mpc, list]:
    """Leading coefficient and clustered roots of a polynomial.

    Coefficients below the half-precision guard relative to the largest one
    are treated as zero, so degree drops and roots at 0 are exact.
    """
    dps = 2 * working_dps(prec)
    tol = _tol(prec)
    with mp.workdps(dps):
        scale = max(abs(c) for c in coeffs)
        if scale == 0:
            raise ParameterError("zero polynomial")
        cs = [c if abs(c) > tol * scale * mpf(10) ** (-prec // 4) else mpc(0) for c in coeffs]
        cs = _trim(cs)
        zero_mult = 0
        while zero_mult < len(cs) - 1 and cs[zero_mult] == 0:
            zero_mult += 1
        core = cs[zero_mult:]
        lead = core[-1]
        roots = []
        if len(core) == 2:
            roots = [-core[0] / core[1]]
        elif len(core) > 2:
            try:
                seeds = _seed_roots(core)
            except (OverflowError, ZeroDivisionError) as exc:
                raise NumericError(f"root finding failed for coordinate {index}", index) from exc
            roots = [_polish(core, s, dps) for s in seeds]
            resid = max(abs(mp.polyval(list(reversed(core)), r)) for r in roots)
            if not mp.isfinite(resid):
                raise NumericError(f"root finding failed for coordinate {index}", index)
        clustered = _cluster(roots, tol, working_dps(prec)) if roots else []
        if zero_mult:
            clustered = [(mpc(0), zero_mult)] + clustered
        return lead, clustered


def _cancel(zeros: list, poles: list, tol) -> tuple[tuple, tuple]:
    zs = [list(z) for z in zeros]
    ps = [list(p) for p in poles]
    for z in zs:
        for p in ps:
            if z[1] and p[1] and abs(z[0] - p[0]) < tol:
                k = min(z[1], p[1])
                z[1] -= k
                p[1] -= k
    return tuple((r, m) for r, m in zs if m), tuple((r, m) for r, m in ps if m)


def _expand(lead, roots, dps: int) -> list:
    with mp.workdps(dps):
        out = [mpc(lead)]
        for r, m in roots:
            out = poly_mul(out, poly_pow([-r, mpc(1)], m))
        return out


@dataclass(frozen=True, eq=False)
class RationalFunction1:
    """Univariate rational function N(t)/D(t) with complex coefficients.

    Coefficients are ascending. On construction the common roots of N and D
    are cancelled numerically and the factored form
    ``lead * prod (t - zero)^m / prod (t - pole)^n`` is kept for evaluation.
    """

    numerator: tuple
    denominator: tuple = (1,)
    prec: int = DEFAULT_PREC
    zeros: tuple = field(init=False, repr=False)
    poles: tuple = field(init=False, repr=False)
    lead: mpc = field(init=False, repr=False)

    def __post_init__(self):
        dps = 2 * working_dps(self.prec)
        num = tuple(parse_coefficient(c, dps) for c in self.numerator)
        den = tuple(parse_coefficient(c, dps) for c in self.denominator)
        if all(c == 0 for c in den):
            raise ParameterError("denominator is identically zero")
        if all(c == 0 for c in num):
            raise ParameterError("numerator is identically zero; a cube coordinate cannot vanish identically")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)
        ln, zs = _roots_with_multiplicity(num, self.prec)
        ld, ps = _roots_with_multiplicity(den, self.prec)
        zeros, poles = _cancel(zs, ps, _tol(self.prec))
        with mp.workdps(dps):
            object.__setattr__(self, "zeros", zeros)
            object.__setattr__(self, "poles", poles)
            object.__setattr__(self, "lead", ln / ld)

    @classmethod
    def from_roots(cls, lead, zeros=(), poles=(), prec: int = DEFAULT_PREC) -> "RationalFunction1":
        """Build directly from ``(root, multiplicity)`` lists, without root finding."""
        dps = 2 * working_dps(prec)
        lead = parse_coefficient(lead, dps)
        zeros = [(parse_coefficient(r, dps), int(m)) for r, m in zeros]
        poles = [(parse_coefficient(r, dps), int(m)) for r, m in poles]
        zeros, poles = _cancel(zeros, poles, _tol(prec))
        obj = object.__new__(cls)
        object.__setattr__(obj, "numerator", tuple(_expand(lead, zeros, dps)))
        object.__setattr__(obj, "denominator", tuple(_expand(1, poles, dps)))
        object.__setattr__(obj, "prec", prec)
        object.__setattr__(obj, "zeros", zeros)
        object.__setattr__(obj, "poles", poles)
        object.__setattr__(obj, "lead", lead)
        return obj

    @property
    def degree_balance(self) -> int:
        """deg N - deg D after cancellation; > 0 means a pole at t = inf."""
        return sum(m for _, m in self.zeros) - sum(m for _, m in self.poles)

    def is_constant(self) -> bool:
        return not self.zeros and not self.poles

    def __call__(self, t):
        """Value at ``t`` (``INF`` allowed); returns ``INF`` at poles."""
        tol = _tol(self.prec)
        with mp.workdps(working_dps(self.prec)):
            if is_infinite(t):
                bal = self.degree_balance
                if bal > 0:
                    return INF
                return mpc(0) if bal < 0 else +self.lead
            t = mpc(t)
            for r, _ in self.zeros:
                if abs(t - r) < tol:
                    return mpc(0)
            for r, _ in self.poles:
                if abs(t - r) < tol:
                    return INF
            v = self.lead
            for r, m in self.zeros:
                v *= (t - r) ** m
            for r, m in self.poles:
                v /= (t - r) ** m
            return v

    def eval_complex(self, t: complex) -> complex:
        """Double-precision value for scanning; may raise ZeroDivisionError."""
        v = complex(self.lead)
        for r, m in self.zeros:
            v *= (t - complex(r)) ** m
        for r, m in self.poles:
            v /= (t - complex(r)) ** m
        return v

    def log_derivative(self, t: complex) -> complex:
        """z'(t)/z(t) in double precision."""
        return (sum(m / (t - complex(r)) for r, m in self.zeros)
                - sum(m / (t - complex(r)) for r, m in self.poles))

    def mobius(self, a, b, c, d) -> "RationalFunction1":
        """z((a t + b)/(c t + d)), computed on the factored form.

        A root r pulls back to (r d - b)/(a - r c), or to t = inf when
        a = r c; the leftover powers of (c t + d) put a root or pole at -d/c.
        """
        dps = 2 * working_dps(self.prec)
        tol = _tol(self.prec)
        with mp.workdps(dps):
            a, b, c, d = (parse_coefficient(x, dps) for x in (a, b, c, d))
            if abs(a * d - b * c) < tol * max(abs(a), abs(b), abs(c), abs(d)) ** 2:
                raise ParameterError("Mobius map must have a d - b c != 0")
            lead = mpc(self.lead)
            zeros, poles = [], []
            scale = max(abs(a), abs(c))
            for roots, sink, sign in ((self.zeros, zeros, 1), (self.poles, poles, -1)):
                for r, m in roots:
                    lin = a - r * c
                    if abs(lin) < tol * scale * max(1, abs(r)):
                        lead *= (b - r * d) ** (sign * m)
                    else:
                        lead *= lin ** (sign * m)
                        sink.append(((r * d - b) / lin, m))
            bal = self.degree_balance  # net power of (c t + d) in the denominator
            if bal:
                if abs(c) < tol * max(abs(d), 1):
                    lead /= d ** bal
                else:
                    lead /= c ** bal
                    (poles if bal > 0 else zeros).append((-d / c, abs(bal)))
        return RationalFunction1.from_roots(lead, zeros, poles, self.prec)

    def to_json(self) -> dict:
        def enc(c):
            with mp.workdps(self.prec):
                return [mp.nstr(c.real, self.prec), mp.nstr(c.imag, self.prec)]
        return {"num": [enc(c) for c in _trim(list(self.numerator))],
                "den": [enc(c) for c in _trim(list(self.denominator))]}


def _near_one(v, prec: int) -> bool:
    return not is_infinite(v) and abs(v - 1) < _tol(prec)


@dataclass(frozen=True)
class ParametrizedPrecycle:
    coords: tuple

    def __post_init__(self):
        coords = tuple(self.coords)
        if not coords:
            raise ParameterError("a precycle needs at least one coordinate")
        for i, z in enumerate(coords, 1):
            if not isinstance(z, RationalFunction1):
                raise ParameterError(f"coordinate {i} is not a RationalFunction1")
            if z.is_constant() and _near_one(z.lead, z.prec):
                raise ParameterError(f"coordinate {i} is identically 1; the curve misses the cube")
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def prec(self) -> int:
        return min(z.prec for z in self.coords)

    def mobius(self, a, b, c, d) -> "ParametrizedPrecycle":
        return ParametrizedPrecycle(tuple(z.mobius(a, b, c, d) for z in self.coords))

    def to_json(self) -> list:
        return [z.to_json() for z in self.coords]


@dataclass(frozen=True)
class PrecycleCombination:
    """Integer combination of precycles in the same cube."""

    terms: tuple  # of (int, ParametrizedPrecycle)

    def __post_init__(self):
        terms = tuple((int(c), z) for c, z in self.terms)
        if not terms:
            raise ParameterError("empty precycle combination")
        if len({z.n for _, z in terms}) != 1:
            raise ParameterError("all precycles in a combination must have the same cube dimension")
        object.__setattr__(self, "terms", terms)

    @property
    def n(self) -> int:
        return self.terms[0][1].n


PrecycleLike = Union[ParametrizedPrecycle, PrecycleCombination]


@dataclass(frozen=True)
class FaceIntersection:
    i: int  # 1-based coordinate index
    face: str  # FACE_ZERO or FACE_INF
    t0: object  # mpc or INF
    multiplicity: int
    degenerate: bool
    witness_j: int | None
    point: tuple  # remaining coordinates at t0

    def to_json(self, prec: int = 15) -> dict:
        return {
            "i": self.i, "face": self.face, "t0": _encode_value(self.t0, prec),
            "multiplicity": self.multiplicity, "degenerate": self.degenerate,
            "witness_j": self.witness_j, "point": [_encode_value(v, prec) for v in self.point],
        }


def _encode_value(v, prec: int):
    if is_infinite(v):
        return "inf"
    with mp.workdps(prec):
        return [mp.nstr(v.real, prec), mp.nstr(v.imag, prec)]


def face_intersections(z: ParametrizedPrecycle) -> list[FaceIntersection]:
    out = []
    for i, zi in enumerate(z.coords, 1):
        locations = [(FACE_ZERO, r, m) for r, m in zi.zeros]
        locations += [(FACE_INF, r, m) for r, m in zi.poles]
        bal = zi.degree_balance
        if bal > 0:
            locations.append((FACE_INF, INF, bal))
        elif bal < 0:
            locations.append((FACE_ZERO, INF, -bal))
        for face, t0, mult in locations:
            point = []
            witness = None
            for j, zj in enumerate(z.coords, 1):
                if j == i:
                    continue
                v = zj(t0)
                point.append(v)
                if witness is None and _near_one(v, z.prec):
                    witness = j
            out.append(FaceIntersection(i, face, t0, mult, witness is not None, witness, tuple(point)))
    return out


def _points_equal(p: tuple, q: tuple, tol) -> bool:
    if len(p) != len(q):
        return False
    for a, b in zip(p, q):
        if is_infinite(a) or is_infinite(b):
            if not (is_infinite(a) and is_infinite(b)):
                return False
        elif abs(a - b) >= tol:
            return False
    return True


@dataclass
class FormalPointSum:
    """Finite Z-linear combination of points, merged up to tolerance."""

    tol: mpf
    terms: list = field(default_factory=list)  # [coeff, point]

    def add(self, coeff: int, point: tuple) -> None:
        for entry in self.terms:
            if _points_equal(entry[1], point, self.tol):
                entry[0] += coeff
                break
        else:
            self.terms.append([coeff, point])
        self.terms = [e for e in self.terms if e[0]]

    def extend(self, other: "FormalPointSum", scale: int = 1) -> None:
        for c, p in other.terms:
            self.add(scale * c, p)

    def is_zero(self) -> bool:
        return not self.terms

    def equivalent(self, other: "FormalPointSum") -> bool:
        diff = FormalPointSum(max(self.tol, other.tol))
        diff.extend(self)
        diff.extend(other, -1)
        return diff.is_zero()

    def to_json(self, prec: int = 15) -> list:
        return [{"coeff": c, "point": [_encode_value(v, prec) for v in p]} for c, p in self.terms]


def _terms_of(z: PrecycleLike) -> tuple:
    if isinstance(z, ParametrizedPrecycle):
        return ((1, z),)
    return z.terms


def _prec_of(z: PrecycleLike) -> int:
    return min(p.prec for _, p in _terms_of(z))


def face_cycle(z: PrecycleLike, i: int, face: str) -> FormalPointSum:
    """Z . {z_i = face} as a formal sum over non-degenerate intersections."""
    out = FormalPointSum(_tol(_prec_of(z)))
    for coeff, p in _terms_of(z):
        for fi in face_intersections(p):
            if fi.i == i and fi.face == face and not fi.degenerate:
                out.add(coeff * fi.multiplicity, fi.point)
    return out


def boundary(z: PrecycleLike) -> FormalPointSum:
    """sum_i (-1)^i (Z.{z_i = inf} - Z.{z_i = 0}); empty means the boundary vanishes."""
    out = FormalPointSum(_tol(_prec_of(z)))
    for i in range(1, z.n + 1):
        sign = (-1) ** i
        out.extend(face_cycle(z, i, FACE_INF), sign)
        out.extend(face_cycle(z, i, FACE_ZERO), -sign)
    return out


def normalization_violations(z: PrecycleLike, strict: bool = False) -> list[tuple[int, str, FormalPointSum]]:
    """Faces whose intersection cycle is nonzero but must vanish.

    The default requires both faces of z_i to be empty for i < n. With
    ``strict`` the zero face must also be empty for i = n.
    """
    bad = []
    for i in range(1, z.n + 1):
        faces = []
        if i < z.n:
            faces = [FACE_ZERO, FACE_INF]
        elif strict:
            faces = [FACE_ZERO]
        for face in faces:
            cyc = face_cycle(z, i, face)
            if not cyc.is_zero():
                bad.append((i, face, cyc))
    return bad


def is_normalized(z: PrecycleLike, strict: bool = False) -> bool:
    return not normalization_violations(z, strict)


# --- properness probe ------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    re_min: float = -2.0
    re_max: float = 2.0
    im_min: float = -2.0
    im_max: float = 2.0
    nx: int = 96
    ny: int = 96


@dataclass(frozen=True)
class ProbePoint:
    t: complex
    residual: float
    kind: str  # "triple" or "limit"
    singular_coords: tuple = ()


@dataclass
class ProbeReport:
    points: list
    failures: list
    resolution: tuple
    candidates: int

    @property
    def found(self) -> bool:
        return bool(self.points)

    def summary(self) -> str:
        if not self.points:
            return f"none found at resolution {self.resolution[0]}x{self.resolution[1]} (heuristic scan)"
        locs = ", ".join(f"{p.t.real:+.6f}{p.t.imag:+.6f}i ({p.kind})" for p in self.points)
        return f"candidate triple intersections near: {locs} (heuristic scan)"

    def to_json(self) -> dict:
        return {
            "heuristic": True,
            "resolution": list(self.resolution),
            "candidate_cells": self.candidates,
            "points": [{"t": [p.t.real, p.t.imag], "residual": p.residual, "kind": p.kind,
                        "singular_coords": list(p.singular_coords)} for p in self.points],
            "failures": [{"seed": [s.real, s.imag], "reason": why} for s, why in self.failures],
            "summary": self.summary(),
        }


def _phase(z: RationalFunction1, t: complex) -> float | None:
    """arg(-z(t)) in (-pi, pi]; zero exactly on T_z. None at zeros/poles."""
    try:
        v = z.eval_complex(t)
    except ZeroDivisionError:
        return None
    if v == 0 or not cmath.isfinite(v):
        return None
    return cmath.phase(-v)


def _cell_crosses(phases: Sequence) -> bool:
    """Whether T_z meets the cell with these corner phases (in cyclic order)."""
    if any(p is None for p in phases):
        return True
    for a, b in zip(phases, phases[1:] + phases[:1]):
        if (a <= 0 <= b or b <= 0 <= a) and abs(a - b) < math.pi:
            return True
    return False


def _refine(z: ParametrizedPrecycle, seed: complex, max_iter: int = 200):
    """Levenberg-Marquardt on the three phase residuals; returns (t, |F|, ok, reason)."""
    t = seed
    lam = 1e-3
    for _ in range(max_iter):
        f = [_phase(c, t) for c in z.coords]
        if any(p is None for p in f):
            return t, 0.0, True, "hit zero/pole"
        norm = math.sqrt(sum(p * p for p in f))
        if norm < 1e-12:
            return t, norm, True, ""
        rows = []
        for c in z.coords:
            h = c.log_derivative(t)
            rows.append((h.imag, h.real))  # d phase/dx, d phase/dy
        a11 = sum(r[0] * r[0] for r in rows)
        a12 = sum(r[0] * r[1] for r in rows)
        a22 = sum(r[1] * r[1] for r in rows)
        g1 = sum(r[0] * p for r, p in zip(rows, f))
        g2 = sum(r[1] * p for r, p in zip(rows, f))
        while True:
            m11, m22 = a11 * (1 + lam), a22 * (1 + lam)
            det = m11 * m22 - a12 * a12
            if det == 0 or not math.isfinite(det):
                return t, norm, False, "singular Jacobian"
            dx = -(m22 * g1 - a12 * g2) / det
            dy = -(m11 * g2 - a12 * g1) / det
            trial = t + complex(dx, dy)
            ft = [_phase(c, trial) for c in z.coords]
            if any(p is None for p in ft):
                return trial, 0.0, True, "hit zero/pole"
            if math.sqrt(sum(p * p for p in ft)) < norm:
                t = trial
                lam = max(lam / 3, 1e-12)
                break
            lam *= 4
            if lam > 1e12:
                return t, norm, norm < 1e-7, "stalled"
        if abs(complex(dx, dy)) < 1e-15 * max(1.0, abs(t)):
            return t, norm, norm < 1e-7, "step underflow"
        if abs(t) > 1e8:
            return t, norm, False, "diverged"
    return t, norm, False, "iteration limit"


def properness_probe(z: ParametrizedPrecycle, grid: GridSpec | None = None) -> ProbeReport:
    """Heuristically locate t where all three coordinates are negative real.

    Each T_{z_i} is the curve arg(-z_i) = 0. Grid cells crossed by all three
    curves seed a Levenberg-Marquardt refinement. Converged points are
    reported as ``triple``, or as ``limit`` when the refinement runs into a
    zero or pole of some coordinate (the curves then only meet in the
    closure). Failed refinements are listed per seed.
    """
    if z.n != 3:
        raise ParameterError("the properness probe is defined for precycles in the 3-cube")
    grid = grid or GridSpec()
    xs = [grid.re_min + (grid.re_max - grid.re_min) * k / grid.nx for k in range(grid.nx + 1)]
    ys = [grid.im_min + (grid.im_max - grid.im_min) * k / grid.ny for k in range(grid.ny + 1)]
    phases = [[[_phase(c, complex(x, y)) for c in z.coords] for y in ys] for x in xs]
    seeds = []
    for a in range(grid.nx):
        for b in range(grid.ny):
            corners = [phases[a][b], phases[a + 1][b], phases[a + 1][b + 1], phases[a][b + 1]]
            if all(_cell_crosses([c[k] for c in corners]) for k in range(3)):
                seeds.append(complex((xs[a] + xs[a + 1]) / 2, (ys[b] + ys[b + 1]) / 2))
    points: list[ProbePoint] = []
    failures = []
    cell = max((grid.re_max - grid.re_min) / grid.nx, (grid.im_max - grid.im_min) / grid.ny)
    for seed in seeds:
        t, res, ok, reason = _refine(z, seed)
        if not ok:
            failures.append((seed, reason))
            continue
        if abs(t - seed) > 2 * cell:
            failures.append((seed, "left its seed cell"))
            continue
        singular = []
        for k, c in enumerate(z.coords, 1):
            try:
                v = abs(c.eval_complex(t))
            except ZeroDivisionError:
                v = math.inf
            if v < 1e-5 or v > 1e5:
                singular.append(k)
        kind = "limit" if singular else "triple"
        if any(abs(p.t - t) < 1e-5 for p in points):
            continue
        points.append(ProbePoint(t, res, kind, tuple(singular)))
    points.sort(key=lambda p: (p.t.imag, p.t.real))
    return ProbeReport(points, failures, (grid.nx, grid.ny), len(seeds))


# --- catalog examples and JSON --------------------------------------------

def cyclotomic_precycle(l: int, a: int = 1, prec: int = DEFAULT_PREC) -> ParametrizedPrecycle:
    """(1 - zeta_l^a / t, 1 - t, t^(-l))."""
    zeta = RootOfUnity(l, a)
    z1 = RationalFunction1(({"zeta": [l, zeta.exponent], "c": -1}, 1), (0, 1), prec)
    z2 = RationalFunction1((1, -1), (1,), prec)
    z3 = RationalFunction1((1,), (0,) * l + (1,), prec)
    return ParametrizedPrecycle((z1, z2, z3))


def gaussian_field_components(prec: int = DEFAULT_PREC) -> tuple[ParametrizedPrecycle, ParametrizedPrecycle]:
    """(Z_+, Z_-) with Z_+ = (((z-i)/(z+i))^2, ((z-1)/(z+1))^2, z^2), Z_- its inverse."""
    i = [0, 1]
    mi = [0, -1]
    sq = lambda lin: poly_mul(lin, lin)  # noqa: E731
    dps = working_dps(prec)
    a = [parse_coefficient(c, dps) for c in (mi, 1)]
    b = [parse_coefficient(c, dps) for c in (i, 1)]
    with mp.workdps(dps):
        zi_num, zi_den = sq(a), sq(b)
        z1_num, z1_den = sq([mpc(-1), mpc(1)]), sq([mpc(1), mpc(1)])
        zz = [mpc(0), mpc(0), mpc(1)]
    plus = ParametrizedPrecycle((
        RationalFunction1(tuple(zi_num), tuple(zi_den), prec),
        RationalFunction1(tuple(z1_num), tuple(z1_den), prec),
        RationalFunction1(tuple(zz), (1,), prec),
    ))
    minus = ParametrizedPrecycle((
        RationalFunction1(tuple(zi_den), tuple(zi_num), prec),
        RationalFunction1(tuple(z1_den), tuple(z1_num), prec),
        RationalFunction1((1,), tuple(zz), prec),
    ))
    return plus, minus


def gaussian_field_cycle(prec: int = DEFAULT_PREC) -> PrecycleCombination:
    plus, minus = gaussian_field_components(prec)
    return PrecycleCombination(((1, minus), (-1, plus)))


def _precycle_from_coords(coords, prec: int) -> ParametrizedPrecycle:
    if not isinstance(coords, list):
        raise ParameterError("precycle coordinates must be a JSON list")
    fns = []
    for k, c in enumerate(coords, 1):
        if isinstance(c, dict):
            num, den = c.get("num"), c.get("den", [1])
        elif isinstance(c, list) and len(c) == 2:
            num, den = c
        else:
            raise ParameterError(f"coordinate {k}: expected {{num, den}} or [num, den]")
        if not isinstance(num, list) or not isinstance(den, list):
            raise ParameterError(f"coordinate {k}: coefficient arrays must be lists")
        fns.append(RationalFunction1(tuple(num), tuple(den), prec))
    return ParametrizedPrecycle(tuple(fns))


def precycle_from_json(data, prec: int = DEFAULT_PREC) -> PrecycleLike:
    """Parse a precycle or a combination.

    A precycle is a list of coordinates ``{"num": [...], "den": [...]}``
    (ascending coefficients). A combination is
    ``{"terms": [{"c": int, "coords": [...]}, ...]}``.
    """
    if isinstance(data, str):
        data = json.loads(data)
    if isinstance(data, dict):
        if "terms" in data:
            terms = [(int(t.get("c", 1)), _precycle_from_coords(t["coords"], prec)) for t in data["terms"]]
            return PrecycleCombination(tuple(terms))
        if "coords" in data:
            return _precycle_from_coords(data["coords"], prec)
        raise ParameterError("precycle object needs 'coords' or 'terms'")
    return _precycle_from_coords(data, prec)
