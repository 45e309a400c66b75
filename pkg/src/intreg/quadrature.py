"""Adaptive Gauss-Kronrod quadrature at arbitrary working precision.

The (G_n, K_{2n+1}) node pairs are generated exactly: the Stieltjes polynomial
is solved for in rational arithmetic, its roots and the Kronrod weights are
then computed at the requested number of digits.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

from mpmath import mp, mpf

from .errors import ConvergenceError

GAUSS_POINTS = 7


class QuadratureResult(NamedTuple):
    value: object
    error: object
    intervals: int


def _legendre_coeffs(n: int) -> list[Fraction]:
    """Monomial coefficients (ascending) of the Legendre polynomial P_n."""
    p0, p1 = [Fraction(1)], [Fraction(0), Fraction(1)]
    if n == 0:
        return p0
    for k in range(1, n):
        # (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
        nxt = [Fraction(0)] * (k + 2)
        for i, c in enumerate(p1):
            nxt[i + 1] += Fraction(2 * k + 1, k + 1) * c
        for i, c in enumerate(p0):
            nxt[i] -= Fraction(k, k + 1) * c
        p0, p1 = p1, nxt
    return p1


def _moment(j: int) -> Fraction:
    return Fraction(2, j + 1) if j % 2 == 0 else Fraction(0)


def _solve_rational(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(b)
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def _stieltjes_coeffs(n: int) -> list[Fraction]:
    """Monic E_{n+1} with  int_{-1}^{1} P_n E_{n+1} x^k dx = 0  for k <= n."""
    p = _legendre_coeffs(n)
    deg = n + 1
    free = [j for j in range(deg) if (deg - j) % 2 == 0]
    ks = [k for k in range(n + 1) if (n + deg + k) % 2 == 0]

    def inner(j: int, k: int) -> Fraction:
        return sum((c * _moment(i + j + k) for i, c in enumerate(p)), Fraction(0))

    a = [[inner(j, k) for j in free] for k in ks]
    b = [-inner(deg, k) for k in ks]
    sol = _solve_rational(a, b)
    coeffs = [Fraction(0)] * (deg + 1)
    coeffs[deg] = Fraction(1)
    for j, v in zip(free, sol):
        coeffs[j] = v
    return coeffs


def _real_roots(coeffs: Sequence[Fraction], dps: int) -> list[mpf]:
    with mp.workdps(dps + 20):
        desc = [mpf(c.numerator) / c.denominator for c in reversed(coeffs)]
        roots = mp.polyroots(desc, maxsteps=400, extraprec=4 * dps)
        return sorted(mpf(r.real) for r in roots)


@lru_cache(maxsize=None)
def kronrod_rule(n: int, dps: int) -> tuple[tuple, tuple, tuple]:
    """Nodes, Kronrod weights and embedded Gauss weights on [-1, 1].

    Gauss weights are zero at the Kronrod-only nodes.
    """
    gauss = _real_roots(_legendre_coeffs(n), dps)
    extra = _real_roots(_stieltjes_coeffs(n), dps)
    with mp.workdps(dps + 20):
        tagged = sorted([(x, True) for x in gauss] + [(x, False) for x in extra])
        nodes = [x for x, _ in tagged]
        size = len(nodes)
        vander = mp.matrix([[x ** k for x in nodes] for k in range(size)])
        rhs = mp.matrix([mpf(_moment(k).numerator) / _moment(k).denominator
                         for k in range(size)])
        wk = mp.lu_solve(vander, rhs)
        dpn = [i * c for i, c in enumerate(_legendre_coeffs(n))][1:]

        def deriv(x):
            return sum(mpf(c.numerator) / c.denominator * x ** i for i, c in enumerate(dpn))

        wg = [2 / ((1 - x * x) * deriv(x) ** 2) if is_gauss else mpf(0)
              for x, is_gauss in tagged]
        return tuple(nodes), tuple(wk[i] for i in range(size)), tuple(wg)


def _panel(f: Callable, a, b, rule) -> tuple:
    nodes, wk, wg = rule
    half = (b - a) / 2
    mid = (a + b) / 2
    k_sum = 0
    g_sum = 0
    for x, w1, w2 in zip(nodes, wk, wg):
        fx = f(mid + half * x)
        k_sum += w1 * fx
        if w2:
            g_sum += w2 * fx
    return k_sum * half, abs((k_sum - g_sum) * half)


def integrate(f: Callable, points: Sequence, *, abs_tol=None, rel_tol=None,
              dps: int | None = None, limit: int = 4000,
              n: int = GAUSS_POINTS) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod integration of ``f`` over ``points``.

    ``points`` is an increasing sequence of real breakpoints; the integrand is
    never evaluated at them. The interval with the largest error estimate is
    bisected until the summed estimate drops below
    ``max(abs_tol, rel_tol*|I|)``. Raises ``ConvergenceError`` (with the
    partial result) after ``limit`` panels.
    """
    dps = dps or mp.dps
    with mp.workdps(dps):
        abs_tol = mpf(10) ** (-dps + 5) if abs_tol is None else mpf(abs_tol)
        rel_tol = mpf(0) if rel_tol is None else mpf(rel_tol)
        rule = kronrod_rule(n, dps)
        heap = []
        counter = 0
        for a, b in zip(points[:-1], points[1:]):
            a, b = mpf(a), mpf(b)
            val, err = _panel(f, a, b, rule)
            heapq.heappush(heap, (-err, counter, a, b, val))
            counter += 1
        while True:
            total = sum(item[4] for item in heap)
            err = sum(-item[0] for item in heap)
            if err <= max(abs_tol, rel_tol * abs(total)):
                return QuadratureResult(total, err, len(heap))
            if len(heap) >= limit:
                raise ConvergenceError(
                    f"quadrature did not converge: error {mp.nstr(err, 3)} after {limit} panels",
                    partial=QuadratureResult(total, err, len(heap)))
            _, _, a, b, _ = heapq.heappop(heap)
            m = (a + b) / 2
            for lo, hi in ((a, m), (m, b)):
                val, e = _panel(f, lo, hi, rule)
                heapq.heappush(heap, (-e, counter, lo, hi, val))
                counter += 1
