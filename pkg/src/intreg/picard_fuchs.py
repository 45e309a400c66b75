"""Periods, regulator periods and the higher normal function for local P^2.

The family is governed by L = delta^2 - 27 t^3 (delta + 1)(delta + 2) with
delta = t d/dt. All series are exact in Q[i*pi]; the quadrature routines
give an independent numeric value of the beta regulator period for
small real t > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from mpmath import mp, mpf

from .errors import DomainError, NumericError, ParameterError
from .logseries import LogSeries, PiCoefficient
from .numeric import DEFAULT_PREC, working_dps
from .quadrature import integrate

MAX_SERIES_ORDER = 200
MAX_XI_ORDER = 30
# A published closed form for nu writes the t^3 log t term as 3 log(t) (9 t^3).
NU_REFERENCE_T3_LOG_COEFF = Fraction(27)

TWO_PI_I = PiCoefficient.ipi(2)


def _check_order(N: int) -> None:
    if not 0 <= N <= MAX_SERIES_ORDER:
        raise ParameterError(f"series order must be in [0, {MAX_SERIES_ORDER}], got {N}")


def a_coeff(n: int) -> int:
    """(3n)!/(n!)^3."""
    return factorial(3 * n) // factorial(n) ** 3


@lru_cache(maxsize=None)
def b_coeff(n: int) -> Fraction:
    """sum_{k<n} (3/(3k+1) + 3/(3k+2) - 2/(k+1))."""
    return sum((Fraction(3, 3 * k + 1) + Fraction(3, 3 * k + 2) - Fraction(2, k + 1) for k in range(n)),
               Fraction(0))


def delta_t(s: LogSeries) -> LogSeries:
    return s.delta()


def apply_PF(s: LogSeries) -> LogSeries:
    """L applied exactly; the result is flagged valid through N - 3."""
    d1 = s.delta()
    d2 = d1.delta()
    rising = d2 + d1 * 3 + s * 2  # (delta+1)(delta+2) = delta^2 + 3 delta + 2
    out = d2 - rising.shift(3) * 27
    return out.truncate(max(s.order - 3, 0))


def _holomorphic(N: int, coeff) -> dict:
    return {(0, 3 * n): coeff(n) for n in range(0, N // 3 + 1) if coeff(n)}


def solution_pi1(N: int) -> LogSeries:
    _check_order(N)
    return LogSeries(_holomorphic(N, a_coeff), N)


def solution_pi2(N: int) -> LogSeries:
    """3 log(t) pi_1 + sum a_n b_n t^{3n}."""
    _check_order(N)
    log_part = {(1, 3 * n): 3 * a_coeff(n) for n in range(N // 3 + 1)}
    return LogSeries(log_part, N) + LogSeries(_holomorphic(N, lambda n: a_coeff(n) * b_coeff(n)), N)


def _capital_b(n: int) -> Fraction:
    return b_coeff(n) - Fraction(1, n)


def regulator_period_series(gamma: str, N: int) -> LogSeries:
    """R_t(alpha) or R_t(beta) as an exact log-series through t^N."""
    _check_order(N)
    terms = range(1, N // 3 + 1)
    if gamma == "alpha":
        s = LogSeries.log(N) + LogSeries({(0, 3 * n): Fraction(a_coeff(n), 3 * n) for n in terms}, N)
        return s * TWO_PI_I
    if gamma == "beta":
        coeffs: dict = {(2, 0): Fraction(9, 2), (0, 0): PiCoefficient.pi_squared(Fraction(-1, 2))}
        for n in terms:
            coeffs[(1, 3 * n)] = Fraction(3 * a_coeff(n), n)
            coeffs[(0, 3 * n)] = a_coeff(n) * _capital_b(n) / n
        return LogSeries(coeffs, N)
    raise ParameterError(f"unknown cycle {gamma!r}; expected 'alpha' or 'beta'")


def omega_period_series(gamma: str, N: int) -> LogSeries:
    """Periods of the holomorphic form: omega(alpha) = 2 pi i pi_1, omega(beta) = 3 pi_2."""
    _check_order(N)
    if gamma == "alpha":
        return solution_pi1(N) * TWO_PI_I
    if gamma == "beta":
        return solution_pi2(N) * 3
    raise ParameterError(f"unknown cycle {gamma!r}; expected 'alpha' or 'beta'")


def nu_series(N: int) -> LogSeries:
    """(1/2 pi i)(R(alpha) omega(beta) - R(beta) omega(alpha)), exactly."""
    prod = (regulator_period_series("alpha", N) * omega_period_series("beta", N)
            - regulator_period_series("beta", N) * omega_period_series("alpha", N))
    return prod.divide_ipi(1) * Fraction(1, 2)


def wronskian(N: int) -> LogSeries:
    p1, p2 = solution_pi1(N), solution_pi2(N)
    return p1 * p2.delta() - p2 * p1.delta()


def nu_notes(nu: LogSeries) -> list[str]:
    """Human-readable remarks attached to nu output."""
    notes = []
    if nu.order >= 3:
        c = nu.coeff(1, 3)
        if c != PiCoefficient.rational(NU_REFERENCE_T3_LOG_COEFF):
            notes.append(
                f"t^3 log(t) coefficient from the exact product is {c}; a published "
                f"closed form shows {NU_REFERENCE_T3_LOG_COEFF}. The difference may be a shift by "
                "Z(2)-multiples of omega-periods; no interpretation is chosen here."
            )
    notes.append("beyond t^3 the coefficients are exact products with no reference values to compare against")
    return notes


# --- branch points and quadrature ------------------------------------------

@dataclass(frozen=True)
class BranchPoints:
    t: mpf
    x0: mpf
    xm: mpf
    xp: mpf

    def residuals(self, dps: int = 30) -> tuple:
        with mp.workdps(dps):
            lam = 1 / self.t
            return tuple(x ** 3 - 2 * lam * x ** 2 + lam ** 2 * x - 4 for x in (self.x0, self.xm, self.xp))


def _safeguarded_newton(f, df, lo, hi, seed, tol, max_iter=400):
    flo = f(lo)
    x = seed if lo < seed < hi else (lo + hi) / 2
    for _ in range(max_iter):
        fx = f(x)
        if fx == 0:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi = x
        d = df(x)
        step = fx / d if d else None
        nxt = x - step if step is not None else None
        if nxt is None or not lo < nxt < hi:
            nxt = (lo + hi) / 2
        if abs(nxt - x) <= tol * abs(nxt) or hi - lo <= tol * abs(hi):
            return nxt
        x = nxt
    raise NumericError("branch point iteration did not converge")


def _check_t(t) -> mpf:
    t = mpf(t)
    if not 0 < t < mpf(1) / 3:
        raise DomainError(f"t must lie in (0, 1/3), got {t}")
    return t


def branch_points(t, prec: int = DEFAULT_PREC) -> BranchPoints:
    """Real roots of x (x - 1/t)^2 = 4, sorted ascending."""
    dps = working_dps(prec)
    with mp.workdps(dps):
        t = _check_t(t)
        lam = 1 / t
        f = lambda x: x * (x - lam) ** 2 - 4  # noqa: E731
        df = lambda x: (3 * x - lam) * (x - lam)  # noqa: E731
        # f(lam/3) = 4 lam^3/27 - 4 measures how far the two small roots are from merging.
        gap = 4 * lam ** 3 / 27 - 4
        if gap < mpf(10) ** (-(prec // 2)) * lam ** 3:
            raise NumericError("branch points x0 and x_- cluster beyond working precision")
        tol = mpf(10) ** (-dps + 3)
        s32 = t * mp.sqrt(t)
        x0 = _safeguarded_newton(f, df, mpf(0), lam / 3, 4 * t ** 2 * (1 + 8 * t ** 3), tol)
        xm = _safeguarded_newton(f, df, lam / 3, lam, (1 - 2 * s32 - 2 * t ** 3) / t, tol)
        xp = _safeguarded_newton(f, df, lam, lam + 4, (1 + 2 * s32 - 2 * t ** 3) / t, tol)
        return BranchPoints(t, x0, xm, xp)


@dataclass(frozen=True)
class QuadratureReport:
    value: mpf
    error: mpf
    intervals: int

    def to_json(self, digits: int = 20) -> dict:
        return {"value": mp.nstr(self.value, digits), "error": mp.nstr(self.error, 3),
                "intervals": self.intervals}


def _split_integral(bp: BranchPoints, g, dps: int, tol) -> QuadratureReport:
    """Integral of g(x) dx over (x0, xm) with x = x0 + u^2 and x = xm - u^2."""
    with mp.workdps(dps):
        mid = (bp.x0 + bp.xm) / 2
        left_end = mp.sqrt(mid - bp.x0)
        right_end = mp.sqrt(bp.xm - mid)
        # 2u/(x0 + u^2) peaks at u = sqrt(x0); a breakpoint there helps the adaptive split.
        knee = mp.sqrt(bp.x0)
        points = [0, knee, left_end] if knee < left_end else [0, left_end]
        left = integrate(lambda u: 2 * u * g(bp.x0 + u * u, u * u, None), points,
                         abs_tol=tol, dps=dps, limit=8000)
        right = integrate(lambda u: 2 * u * g(bp.xm - u * u, None, u * u), [0, right_end],
                          abs_tol=tol, dps=dps, limit=8000)
        return QuadratureReport(left.value + right.value, left.error + right.error,
                                left.intervals + right.intervals)


def _xi_parts(bp: BranchPoints, x, d0, dm):
    """(xi, sqrt(1 - xi)) with the endpoint distances supplied exactly when known."""
    lam = 1 / bp.t
    d0 = x - bp.x0 if d0 is None else d0
    dm = bp.xm - x if dm is None else dm
    denom = x * (x - lam) ** 2
    xi = 4 / denom
    # 1 - xi = f(x)/denom and f(x) = (x - x0)(x - xm)(x - xp) in factored form.
    one_minus = d0 * dm * (bp.xp - x) / denom
    return xi, mp.sqrt(one_minus)


def quadrature_R_beta(t, prec: int = 20) -> QuadratureReport:
    """Integral of log((1 + sqrt(1 - xi))/(1 - sqrt(1 - xi))) dx/x from x0 to x_-."""
    dps = working_dps(prec)
    bp = branch_points(t, prec)
    tol = mpf(10) ** (-prec)

    def g(x, d0, dm):
        xi, s = _xi_parts(bp, x, d0, dm)
        return (2 * mp.log1p(s) - mp.log(xi)) / x

    return _split_integral(bp, g, dps, tol)


@lru_cache(maxsize=None)
def _alpha_table(M: int) -> tuple[Fraction, ...]:
    # sqrt(1 - xi) by the binomial series, then log((1 + s)/2) via L' = g'/g.
    s = [Fraction(1)] + [Fraction((-1) ** m) * _binom_half(m) for m in range(1, M + 1)]
    g = [(Fraction(1) + s[0]) / 2] + [c / 2 for c in s[1:]]
    L = [Fraction(0)] * (M + 1)
    for m in range(1, M + 1):
        acc = m * g[m] - sum(k * L[k] * g[m - k] for k in range(1, m))
        L[m] = acc / m
    return tuple(-2 * L[m] for m in range(1, M + 1))


def _binom_half(m: int) -> Fraction:
    """binomial(1/2, m)."""
    out = Fraction(1)
    for k in range(m):
        out *= (Fraction(1, 2) - k) / (k + 1)
    return out


def alpha_xi_coeffs(M: int) -> list[Fraction]:
    """alpha_1..alpha_M with -sum alpha_m xi^m = log((1+sqrt(1-xi))/(1-sqrt(1-xi))) + log(xi/4)."""
    if not 1 <= M <= MAX_XI_ORDER:
        raise ParameterError(f"M must be in [1, {MAX_XI_ORDER}], got {M}")
    return list(_alpha_table(M))


@dataclass(frozen=True)
class FourTermReport:
    value: mpf
    quadrature_error: mpf
    tail_bound: mpf
    M: int


def four_term_R_beta(t, M: int = MAX_XI_ORDER, prec: int = 20) -> FourTermReport:
    """R_t(beta) via -2 log t I_0 + I_log + 2 I_{log(1-xt)} - sum_{m<=M} alpha_m I_m.

    The first three integrals are closed form. The truncated xi-series is
    integrated numerically; the neglected tail is bounded by
    (2 log 2 - sum alpha_m) times the integral of xi^(M+1) dx/x, since the
    alpha_m are positive and sum to 2 log 2.
    """
    dps = working_dps(prec)
    bp = branch_points(t, prec)
    alphas = alpha_xi_coeffs(M)
    tol = mpf(10) ** (-prec)
    with mp.workdps(dps):
        t = bp.t
        al = [mpf(a.numerator) / a.denominator for a in alphas]
        lx0, lxm = mp.log(bp.x0), mp.log(bp.xm)
        closed = (-2 * mp.log(t) * (lxm - lx0) + (lxm ** 2 - lx0 ** 2) / 2
                  + 2 * (mp.polylog(2, bp.x0 * t) - mp.polylog(2, bp.xm * t)))

        def series_part(x, d0, dm):
            xi = 4 / (x * (x - 1 / t) ** 2)
            return mp.polyval(al[::-1] + [0], xi) / x

        def tail_part(x, d0, dm):
            xi = 4 / (x * (x - 1 / t) ** 2)
            return xi ** (M + 1) / x

        body = _split_integral(bp, series_part, dps, tol)
        tail = _split_integral(bp, tail_part, dps, tol)
        remaining = 2 * mp.log(2) - sum(al)
        return FourTermReport(closed - body.value, body.error, remaining * (tail.value + tail.error), M)
