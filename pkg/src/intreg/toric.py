"""Lattice polygons, tempered Laurent polynomials and constant-term periods.

For a lattice polygon Delta the Laurent polynomial phi is supported on the
boundary lattice points, with edge polynomials (1 + t)^kappa along each edge
of lattice length kappa. The regulator period of the vanishing cycle is
log t + sum_k [phi^k]_0 t^k / k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, ParameterError
from .logseries import LogSeries

MAX_POWER = 60

Point = tuple[int, int]


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Sequence[int]]) -> list[Point]:
    """Strict convex hull (no collinear vertices), counterclockwise."""
    pts = sorted({(int(p[0]), int(p[1])) for p in points})
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class LatticePolytope:
    vertices: tuple

    def __post_init__(self):
        vs = tuple((int(a), int(b)) for a, b in self.vertices)
        if len(vs) < 3:
            raise ParameterError("a polygon needs at least three vertices")
        n = len(vs)
        for i in range(n):
            turn = _cross(vs[i - 1], vs[i], vs[(i + 1) % n])
            if turn == 0:
                raise ParameterError(f"vertices {vs[i - 1]}, {vs[i]}, {vs[(i + 1) % n]} are collinear")
            if turn < 0:
                raise ParameterError("vertices must be listed counterclockwise and in convex position")
        # Left turns everywhere still allow a star that winds twice; compare with the hull.
        if sorted(convex_hull(vs)) != sorted(vs):
            raise ParameterError("vertices are not in convex position")
        # Start at the lexicographically smallest vertex so equal polygons compare equal.
        i = vs.index(min(vs))
        object.__setattr__(self, "vertices", vs[i:] + vs[:i])

    @classmethod
    def hull(cls, points: Iterable[Sequence[int]]) -> "LatticePolytope":
        h = convex_hull(points)
        if len(h) < 3:
            raise ParameterError("points span a degenerate (empty-interior) polygon")
        return cls(tuple(h))

    @classmethod
    def from_json(cls, data) -> "LatticePolytope":
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, dict):
            data = data.get("vertices")
        if not isinstance(data, list) or not all(isinstance(p, list) and len(p) == 2 for p in data):
            raise ParameterError("polytope JSON must be a list of [a, b] vertex pairs")
        return cls.hull(data)

    def to_json(self) -> list:
        return [list(v) for v in self.vertices]

    def edges(self) -> list[tuple[Point, Point]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def edge_lengths(self) -> list[int]:
        return [gcd(q[0] - p[0], q[1] - p[1]) for p, q in self.edges()]

    def _bbox(self):
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    def _sides(self, p: Point) -> list[int]:
        return [_cross(a, b, p) for a, b in self.edges()]

    def contains(self, p: Sequence[int]) -> bool:
        return all(s >= 0 for s in self._sides(tuple(p)))

    def lattice_points(self) -> list[Point]:
        x0, x1, y0, y1 = self._bbox()
        return [(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1) if self.contains((x, y))]

    def area2(self) -> int:
        """Twice the area."""
        vs = self.vertices
        return sum(vs[i][0] * vs[(i + 1) % len(vs)][1] - vs[(i + 1) % len(vs)][0] * vs[i][1]
                   for i in range(len(vs)))


def interior_points(poly: LatticePolytope) -> list[Point]:
    x0, x1, y0, y1 = poly._bbox()
    return [(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)
            if all(s > 0 for s in poly._sides((x, y)))]


def boundary_points(poly: LatticePolytope) -> list[Point]:
    x0, x1, y0, y1 = poly._bbox()
    out = []
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            sides = poly._sides((x, y))
            if all(s >= 0 for s in sides) and any(s == 0 for s in sides):
                out.append((x, y))
    return out


def is_reflexive(poly: LatticePolytope) -> bool:
    """Origin is the only interior point and every edge line is at lattice distance 1."""
    if interior_points(poly) != [(0, 0)]:
        return False
    for (p, q), k in zip(poly.edges(), poly.edge_lengths()):
        if abs(p[0] * q[1] - p[1] * q[0]) != k:
            return False
    return True


class LaurentPolynomial2:
    """Laurent polynomial in x, y with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean: dict[Point, Fraction] = {}
        for (a, b), c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[(int(a), int(b))] = clean.get((int(a), int(b)), Fraction(0)) + c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> "LaurentPolynomial2":
        return cls({(a, b): c})

    @classmethod
    def constant(cls, c) -> "LaurentPolynomial2":
        return cls({(0, 0): c})

    def support(self) -> list[Point]:
        return sorted(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPolynomial2):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other) -> "LaurentPolynomial2":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return LaurentPolynomial2(out)

    def __neg__(self) -> "LaurentPolynomial2":
        return LaurentPolynomial2({k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "LaurentPolynomial2":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPolynomial2":
        if not isinstance(other, LaurentPolynomial2):
            c = Fraction(other)
            return LaurentPolynomial2({k: c * v for k, v in self.terms.items()})
        out: dict[Point, Fraction] = {}
        for (a1, b1), u in self.terms.items():
            for (a2, b2), v in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + u * v
        return LaurentPolynomial2(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPolynomial2":
        if k < 0:
            raise ParameterError("negative powers are not Laurent polynomials in general")
        out = LaurentPolynomial2.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def evaluate(self, x, y):
        return sum(c * Fraction(x) ** a * Fraction(y) ** b for (a, b), c in self.terms.items())

    def to_json(self) -> dict[str, str]:
        def enc(c: Fraction) -> str:
            return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return {f"{a},{b}": enc(self.terms[(a, b)]) for a, b in sorted(self.terms)}

    @classmethod
    def from_json(cls, data) -> "LaurentPolynomial2":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls({tuple(int(s) for s in k.split(",")): Fraction(v) for k, v in data.items()})
        except (ValueError, AttributeError) as exc:
            raise ParameterError(f"bad Laurent polynomial JSON: {exc}") from exc

    def __repr__(self) -> str:
        return f"LaurentPolynomial2({self.to_json()})"


def constant_term(p: LaurentPolynomial2) -> Fraction:
    return p.terms.get((0, 0), Fraction(0))


@dataclass(frozen=True)
class PhiData:
    polytope: LatticePolytope
    phi: LaurentPolynomial2
    interior_points: tuple
    edge_exponents: tuple


def build_phi(poly: LatticePolytope) -> PhiData:
    """phi with coefficient binomial(kappa, s) at the s-th lattice point of each edge."""
    coeffs: dict[Point, int] = {}
    for (p, q), k in zip(poly.edges(), poly.edge_lengths()):
        step = ((q[0] - p[0]) // k, (q[1] - p[1]) // k)
        for s in range(k + 1):
            pt = (p[0] + s * step[0], p[1] + s * step[1])
            c = comb(k, s)
            if pt in coeffs:
                assert coeffs[pt] == c == 1, f"inconsistent corner coefficient at {pt}"
            coeffs[pt] = c
    return PhiData(poly, LaurentPolynomial2(coeffs), tuple(interior_points(poly)),
                   tuple(poly.edge_lengths()))


@dataclass(frozen=True)
class ConstantTermSeries:
    c: tuple  # c[k-1] = [phi^k]_0

    def __getitem__(self, k: int) -> Fraction:
        """[phi^k]_0 for k >= 1."""
        if k < 1 or k > len(self.c):
            raise IndexError(k)
        return self.c[k - 1]

    def __len__(self) -> int:
        return len(self.c)

    def to_json(self) -> list[str]:
        return [str(v) for v in self.c]


def _half_planes(points: Sequence[Point]):
    """Inequalities n . p <= h describing the hull, or None when it is degenerate."""
    h = convex_hull(points)
    if len(h) < 3:
        return None
    out = []
    for i in range(len(h)):
        a, b = h[i], h[(i + 1) % len(h)]
        nx, ny = b[1] - a[1], a[0] - b[0]  # outward normal for a CCW polygon
        out.append((nx, ny, nx * a[0] + ny * a[1]))
    return out


def power_constant_terms(phi: LaurentPolynomial2 | PhiData, K: int, cap: int = MAX_POWER) -> ConstantTermSeries:
    """[phi^k]_0 for k = 1..K by sparse repeated multiplication.

    After k factors, a monomial x^e can only contribute to the constant term
    of phi^K if -e lies in (K - k) * conv(supp phi); other monomials are
    dropped. Coefficients are scaled to integers by their common denominator.
    """
    if isinstance(phi, PhiData):
        phi = phi.phi
    if not 1 <= K <= cap:
        raise ParameterError(f"K must be in [1, {cap}], got {K}")
    if not phi.terms:
        return ConstantTermSeries(tuple(Fraction(0) for _ in range(K)))
    den = 1
    for c in phi.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    base = {k: int(v * den) for k, v in phi.terms.items()}
    planes = _half_planes(list(base))
    current: dict[Point, int] = {(0, 0): 1}
    out = []
    for k in range(1, K + 1):
        remaining = K - k
        nxt: dict[Point, int] = {}
        for (a1, b1), u in current.items():
            for (a2, b2), v in base.items():
                key = (a1 + a2, b1 + b2)
                nxt[key] = nxt.get(key, 0) + u * v
        if planes is not None:
            nxt = {e: c for e, c in nxt.items()
                   if c and all(-nx * e[0] - ny * e[1] <= remaining * h for nx, ny, h in planes)}
        current = nxt
        out.append(Fraction(current.get((0, 0), 0), den ** k))
    return ConstantTermSeries(tuple(out))


def _as_phi_data(obj) -> PhiData:
    if isinstance(obj, PhiData):
        return obj
    if isinstance(obj, LatticePolytope):
        return build_phi(obj)
    raise ParameterError("expected a LatticePolytope or PhiData")


def alpha_period_series(obj: LatticePolytope | PhiData, K: int) -> LogSeries:
    """R_t(alpha)/(2 pi i) = log t + sum_{k<=K} [phi^k]_0 t^k / k."""
    data = _as_phi_data(obj)
    if not is_reflexive(data.polytope):
        raise DomainError("the regulator period series needs a reflexive polygon")
    c = power_constant_terms(data.phi, K)
    coeffs = {(1, 0): 1}
    coeffs.update({(0, k): c[k] / k for k in range(1, K + 1)})
    return LogSeries(coeffs, K)


@dataclass(frozen=True)
class PsiSeries:
    """-log(lambda_l) + sum_k [Psi^k]_0 / k as a polynomial in the parameters.

    ``variables[0]`` is 1/lambda_l; the rest are lambda_j for the other
    interior points, in order. Exponent tuples follow ``variables``.
    """

    ell: int
    variables: tuple
    terms: Mapping
    order: int
    log_coefficient: int = -1

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exponents), Fraction(0))

    def to_json(self) -> dict:
        return {
            "ell": self.ell, "variables": list(self.variables), "order": self.order,
            "log_coefficient": self.log_coefficient,
            "terms": [{"exponents": list(e), "coeff": str(v)} for e, v in sorted(self.terms.items())],
        }


def psi_laurent_terms(data: PhiData, ell: int) -> dict:
    """Psi = (1/lambda_l)(x^-v_l y^-w_l phi - sum_{j != l} lambda_j x^(v_j - v_l) y^(w_j - w_l)).

    Keys are (a, b, exponent tuple) with exponents over :class:`PsiSeries` variables.
    """
    pts = data.interior_points
    if not 0 <= ell < len(pts):
        raise ParameterError(f"interior point index {ell} out of range 0..{len(pts) - 1}")
    v, w = pts[ell]
    others = [j for j in range(len(pts)) if j != ell]
    g = len(pts)
    out: dict = {}
    base = (1,) + (0,) * (g - 1)
    for (a, b), c in data.phi.terms.items():
        key = (a - v, b - w, base)
        out[key] = out.get(key, 0) + c
    for slot, j in enumerate(others, 1):
        e = list(base)
        e[slot] = 1
        key = (pts[j][0] - v, pts[j][1] - w, tuple(e))
        out[key] = out.get(key, 0) - 1
    return {k: Fraction(c) for k, c in out.items() if c}


def psi_alpha_expansion(obj: LatticePolytope | PhiData, ell: int, order: int) -> PsiSeries:
    """Formal expansion truncated at total parameter degree ``order``."""
    data = _as_phi_data(obj)
    if order < 1 or order > MAX_POWER:
        raise ParameterError(f"order must be in [1, {MAX_POWER}]")
    psi = psi_laurent_terms(data, ell)
    names = ("1/lambda_%d" % ell,) + tuple(f"lambda_{j}" for j in range(len(data.interior_points)) if j != ell)
    current = {(0, 0, (0,) * len(names)): Fraction(1)}
    series: dict[tuple, Fraction] = {}
    for k in range(1, order + 1):
        nxt: dict = {}
        for (a1, b1, e1), u in current.items():
            for (a2, b2, e2), v in psi.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if sum(e) > order:
                    continue
                key = (a1 + a2, b1 + b2, e)
                nxt[key] = nxt.get(key, 0) + u * v
        current = {key: c for key, c in nxt.items() if c}
        for (a, b, e), c in current.items():
            if a == 0 and b == 0:
                series[e] = series.get(e, 0) + c / k
    return PsiSeries(ell, names, {e: c for e, c in series.items() if c}, order)


def psi_as_t_series(ps: PsiSeries) -> LogSeries:
    """For a single interior point, substitute lambda_l = 1/t and return R/(2 pi i)."""
    if len(ps.variables) != 1:
        raise ParameterError("only a one-parameter expansion can be written in t")
    coeffs = {(1, 0): -ps.log_coefficient}
    coeffs.update({(0, e[0]): c for e, c in ps.terms.items()})
    return LogSeries(coeffs, ps.order)


def _check_matrix(matrix) -> tuple[int, int, int, int]:
    (a, b), (c, d) = matrix
    if a * d - b * c not in (1, -1):
        raise ParameterError(f"matrix {matrix} is not unimodular")
    return a, b, c, d


def _apply(m, shift, p) -> Point:
    a, b, c, d = m
    return (a * p[0] + b * p[1] + shift[0], c * p[0] + d * p[1] + shift[1])


def unimodular_transform(obj, matrix, shift: Sequence[int] = (0, 0)):
    """Exponent map e -> M e + shift on a Laurent polynomial or a polygon."""
    m = _check_matrix(matrix)
    shift = (int(shift[0]), int(shift[1]))
    if isinstance(obj, LaurentPolynomial2):
        return LaurentPolynomial2({_apply(m, shift, e): c for e, c in obj.terms.items()})
    if isinstance(obj, LatticePolytope):
        return LatticePolytope.hull(_apply(m, shift, v) for v in obj.vertices)
    raise ParameterError("expected a LaurentPolynomial2 or LatticePolytope")


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def tame_edge_check(poly: LatticePolytope, m: int, phi: LaurentPolynomial2 | None = None) -> bool:
    """Check that the edge polynomial from vertex m to m+1 is (1 + x)^kappa.

    The vertex is moved to the origin and the edge rotated onto the positive
    x-axis by an SL_2(Z) map, so the polygon sits in y >= 0 and the edge
    polynomial is the y^0 part.
    """
    n = len(poly.vertices)
    if not 0 <= m < n:
        raise ParameterError(f"vertex index {m} out of range")
    phi = build_phi(poly).phi if phi is None else phi
    p, q = poly.vertices[m], poly.vertices[(m + 1) % n]
    kappa = gcd(q[0] - p[0], q[1] - p[1])
    dx, dy = (q[0] - p[0]) // kappa, (q[1] - p[1]) // kappa
    g, e1, e2 = _ext_gcd(dx, dy)
    if g != 1:
        raise ParameterError("edge direction is not primitive")
    mat = ((e1, e2), (-dy, dx))
    shifted = unimodular_transform(phi, ((1, 0), (0, 1)), (-p[0], -p[1]))
    tilde = unimodular_transform(shifted, mat)
    if any(b < 0 for _, b in tilde.terms):
        raise ParameterError("transformed polynomial does not lie in the upper half plane")
    edge = {a: c for (a, b), c in tilde.terms.items() if b == 0}
    return edge == {s: Fraction(comb(kappa, s)) for s in range(kappa + 1)}


LOCAL_P2 = LatticePolytope(((1, 0), (0, 1), (-1, -1)))
