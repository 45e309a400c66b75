"""Command-line front end.

Exit codes: 0 success, 1 usage or malformed input, 2 domain error,
3 convergence error. JSON output is deterministic (sorted keys).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .errors import ConvergenceError, DomainError, IntregError
from .logseries import LogSeries, PiCoefficient

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    prec: int = 30
    order: int = 30
    format: str = "json"

    def __post_init__(self):
        if self.prec < 10:
            raise UsageError("--prec must be at least 10")
        if self.order < 3:
            raise UsageError("--order must be at least 3")
        if self.format not in ("json", "text"):
            raise UsageError("--format must be json or text")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def pi_text(c: PiCoefficient) -> str:
    """Render an element of Q[i pi] with pi and i written out, e.g. 'pi^2/2'."""
    parts = []
    for k in sorted(c.terms, reverse=True):
        v = c[k] * (-1) ** (k // 2)
        unit = "" if k == 0 else ("pi" if k == 1 else f"pi^{k}")
        if k % 2:
            unit = "i*" + unit
        num, den = abs(v.numerator), v.denominator
        if unit:
            body = unit if num == 1 else f"{num}*{unit}"
            body = body if den == 1 else f"{body}/{den}"
        else:
            body = str(num) if den == 1 else f"{num}/{den}"
        parts.append(("-" if v < 0 else "+", body))
    if not parts:
        return "0"
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {b}" for s, b in parts[1:])


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _series_text(s: LogSeries) -> list[str]:
    lines = []
    for (j, n), c in s.items():
        mono = " ".join(x for x in (f"log(t)^{j}" if j > 1 else "log(t)" if j else "",
                                    f"t^{n}" if n else "") if x)
        lines.append(f"  [{mono or '1'}] {pi_text(c)}")
    lines.append(f"  + O(t^{s.order + 1})")
    return lines


# --- subcommands -----------------------------------------------------------

def cmd_torsion(args, cfg: RunConfig):
    from .torsion import CycleCombination, torsion_report

    z = CycleCombination.from_json(_read_json(args.cycles))
    res = torsion_report(z, cfg.prec)
    out = res.to_json()
    text = [f"tau = {_frac(res.tau)}", f"order = {res.order}",
            f"numeric residual = {mp.nstr(abs(res.numeric_check.value), 3)}"]
    return out, text


def cmd_wgroup(args, cfg: RunConfig):
    from .torsion import FieldSpec, w

    k = FieldSpec.parse(args.field)
    value = w(args.r, k)
    return {"w": value, "r": args.r, "field": args.field}, [f"w_{args.r}({args.field}) = {value}"]


def cmd_regulator(args, cfg: RunConfig):
    from .torsion import (CycleTerm, catalog_regulator, detect_torsion, gaussian_example_regulator,
                          gaussian_quadrature_route)

    if args.cycle == "gaussian":
        value = gaussian_example_regulator(cfg.prec)
        quad = gaussian_quadrature_route(min(cfg.prec, 20))
        out = {"cycle": "gaussian", "regulator": value.to_json(), "quadrature_route": quad.to_json()}
        text = [f"R = {value!r}", f"quadrature route = {quad!r}"]
        return out, text
    try:
        r, l, a = (int(x) for x in args.cycle.split(","))
    except ValueError as exc:
        raise UsageError("--cycle must be 'gaussian' or 'r,l,a'") from exc
    term = CycleTerm(r, l, a)
    value = catalog_regulator(term, cfg.prec)
    out = {"cycle": term.to_json(), "regulator": value.to_json()}
    text = [f"R(Z^{r}_{{{l},{a}}}) = {value!r}"]
    try:
        det = detect_torsion(value, r)
        out["torsion"] = {"tau": _frac(det.tau), "order": det.order}
        text.append(f"torsion: tau = {_frac(det.tau)}, order {det.order}")
    except DomainError as exc:
        out["torsion"] = None
        text.append(f"no torsion reading: {exc}")
    return out, text


def cmd_precycle(args, cfg: RunConfig):
    from .precycle import (ParametrizedPrecycle, boundary, normalization_violations,
                           precycle_from_json, properness_probe)

    z = precycle_from_json(_read_json(args.precycle), cfg.prec)
    if args.action == "boundary":
        b = boundary(z)
        out = {"boundary": b.to_json(), "zero": b.is_zero()}
        text = ["boundary = 0" if b.is_zero() else "boundary is nonzero:"]
        text += [f"  {e['coeff']:+d} {e['point']}" for e in out["boundary"]]
        return out, text
    if args.action == "normalized":
        bad = normalization_violations(z, strict=args.strict)
        out = {"normalized": not bad, "strict": args.strict,
               "violations": [{"i": i, "face": f, "cycle": c.to_json()} for i, f, c in bad]}
        text = [f"normalized = {not bad}"] + [f"  face z_{i} = {f} meets properly" for i, f, _ in bad]
        return out, text
    if not isinstance(z, ParametrizedPrecycle):
        raise UsageError("the probe takes a single precycle, not a combination")
    report = properness_probe(z)
    return report.to_json(), [report.summary()]


def cmd_mirror_alpha(args, cfg: RunConfig):
    from .toric import LatticePolytope, alpha_period_series, build_phi, power_constant_terms

    poly = LatticePolytope.from_json(_read_json(args.polytope))
    data = build_phi(poly)
    series = alpha_period_series(data, cfg.order)
    cts = power_constant_terms(data.phi, cfg.order)
    out = {"polytope": poly.to_json(), "phi": data.phi.to_json(), "constant_terms": cts.to_json(),
           "series": series.to_json()}
    text = [f"phi = {data.phi.to_json()}", "R_t(alpha)/(2 pi i) ="] + _series_text(series)
    return out, text


def cmd_mirror_nu(args, cfg: RunConfig):
    from .picard_fuchs import nu_notes, nu_series

    nu = nu_series(cfg.order)
    const = nu.coeff(0, 0)
    out = {"series": nu.to_json(), "constant_term": const.to_json(),
           "constant_term_text": pi_text(const), "notes": nu_notes(nu)}
    text = [f"constant term = {pi_text(const)}", "nu(t) ="] + _series_text(nu)
    text += [f"note: {n}" for n in out["notes"]]
    return out, text


def cmd_mirror_quadrature(args, cfg: RunConfig):
    from .picard_fuchs import quadrature_R_beta, regulator_period_series

    rep = quadrature_R_beta(args.t, cfg.prec)
    with mp.workdps(cfg.prec + 10):
        t = mp.mpf(args.t)
        series = regulator_period_series("beta", min(cfg.order, 200)).evaluate(t, cfg.prec + 10).real
        leading = mp.mpf(9) / 2 * mp.log(t) ** 2 - mp.pi ** 2 / 2
        digits = min(cfg.prec, 20)
        out = {
            "t": args.t,
            "quadrature": rep.to_json(digits),
            "series_value": mp.nstr(series, digits),
            "relative_difference": mp.nstr((rep.value - series) / series, 3),
            "leading_terms": mp.nstr(leading, digits),
            "remainder_over_t_log_t": mp.nstr((rep.value - leading) / (t * mp.log(t)), 6),
        }
    text = [f"R_t(beta) by quadrature = {out['quadrature']['value']} (error {out['quadrature']['error']})",
            f"series (N={min(cfg.order, 200)}) = {out['series_value']}",
            f"relative difference = {out['relative_difference']}",
            f"(R - (9/2) log^2 t + pi^2/2)/(t log t) = {out['remainder_over_t_log_t']}"]
    return out, text


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prec", type=int, default=argparse.SUPPRESS, help="decimal digits (default 30)")
    common.add_argument("--order", type=int, default=argparse.SUPPRESS, help="series truncation (default 30)")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)

    parser = _Parser(prog="intreg", description="Regulators, torsion and normal functions.",
                     parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("torsion", parents=[common], help="exact torsion of a catalog cycle combination")
    p.add_argument("cycles", help="JSON list of {r, l, a, c} ('-' for stdin)")
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("wgroup", parents=[common], help="w_r(k)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--field", required=True, help="Q | sqrt:d | zeta:n")
    p.set_defaults(func=cmd_wgroup)

    p = sub.add_parser("regulator", parents=[common], help="regulator of a catalog cycle")
    p.add_argument("--cycle", required=True, help="'r,l,a' or 'gaussian'")
    p.set_defaults(func=cmd_regulator)

    p = sub.add_parser("precycle", parents=[common], help="boundary, normalization and properness checks")
    p.add_argument("precycle", help="precycle JSON ('-' for stdin)")
    p.add_argument("action", choices=("boundary", "normalized", "probe"))
    p.add_argument("--strict", action="store_true", help="also require Z.{z_n = 0} = 0")
    p.set_defaults(func=cmd_precycle)

    p = sub.add_parser("mirror-alpha", parents=[common], help="constant-term regulator period")
    p.add_argument("polytope", help="JSON vertex list ('-' for stdin)")
    p.set_defaults(func=cmd_mirror_alpha)

    p = sub.add_parser("mirror-nu", parents=[common], help="higher normal function series")
    p.set_defaults(func=cmd_mirror_nu)

    p = sub.add_parser("mirror-quadrature", parents=[common], help="quadrature of R_t(beta)")
    p.add_argument("--t", required=True, help="real parameter in (0, 1/3)")
    p.set_defaults(func=cmd_mirror_quadrature)
    return parser


def render(out, text: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out, sort_keys=True, indent=2)
    return "\n".join(text)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a subcommand is required")
        cfg = RunConfig(getattr(args, "prec", 30), getattr(args, "order", 30), getattr(args, "format", "json"))
        out, text = args.func(args, cfg)
    except UsageError as exc:
        print(f"intreg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"intreg: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"intreg: convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except IntregError as exc:
        print(f"intreg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(render(out, text, cfg.format))
    return EXIT_OK
