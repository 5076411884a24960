"""Command-line front end.

Exit codes: 0 success, 1 numerical failure (tolerance, convergence or a failed
verification), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Callable, Sequence

from . import dsl, harness
from .errors import (
    MellinError,
    NoConvergence,
    NonFiniteIntegrand,
    NonFiniteTerm,
    ParseError,
    UnknownIdentity,
)
from .mellin import (
    VerticalLine,
    estimate_sup,
    choose_truncation,
    master_theorem_sides,
    mellin_forward,
    mellin_inverse,
    residue_series,
)
from .numerics import QuadratureConfig, SeriesConfig, gamma
from .special import (
    bernoulli_poly,
    euler_numbers,
    euler_poly,
    exp_poly,
    hermite,
    hurwitz_zeta_neg_int,
)

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_USAGE = 2

SEED_ENV = "MELLIN_VERIFY_SEED"
TABLE_N_MAX = 30
DEFAULT_SAMPLES = 25
MASTER_TOL = 1e-7

_NUMERIC_ERRORS = (NoConvergence, NonFiniteIntegrand, NonFiniteTerm)


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return "%.17g" % x


def fmt_complex(z: complex) -> str:
    if z.imag == 0:
        return fmt(z.real)
    sign = "-" if z.imag < 0 or (z.imag == 0 and math.copysign(1, z.imag) < 0) else "+"
    return f"{fmt(z.real)}{sign}{fmt(abs(z.imag))}i"


# ---------------------------------------------------------------------------
# Output


def _flatten(record: dict) -> dict:
    # complex fields become name_re / name_im columns
    flat = {}
    for key, value in record.items():
        if isinstance(value, complex):
            flat[key + "_re"] = value.real
            flat[key + "_im"] = value.imag
        else:
            flat[key] = value
    return flat


def _jsonable(value):
    if isinstance(value, complex):
        return {"re": _json_float(value.real), "im": _json_float(value.imag)}
    if isinstance(value, float):
        return _json_float(value)
    return value


def _json_float(x: float):
    return x if math.isfinite(x) else None


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt(value)
    if isinstance(value, complex):
        return fmt_complex(value)
    return str(value)


def emit_records(records: list[dict], fmt_name: str, out, *, bare: bool = False, many: bool = False) -> None:
    """Write ``records`` (dicts with identical keys) as json, csv or plain text.

    ``bare`` prints only the values in plain mode, one record per line. JSON is
    a list when ``many`` is set and a single object otherwise.
    """
    if fmt_name == "json":
        payload = [{k: _jsonable(v) for k, v in r.items()} for r in records]
        out.write(json.dumps(payload if many else payload[0], sort_keys=True, indent=2, allow_nan=False) + "\n")
    elif fmt_name == "csv":
        flat = [_flatten(r) for r in records]
        writer = csv.writer(out, lineterminator="\n")
        if flat:
            writer.writerow(flat[0].keys())
        for row in flat:
            writer.writerow(_cell(v) for v in row.values())
    else:
        for r in records:
            if bare:
                out.write(" ".join(_cell(v) for v in r.values()) + "\n")
            else:
                out.write("\n".join(f"{k}: {_cell(v)}" for k, v in r.items()) + "\n")


def report_csv(report: harness.Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "params", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err", "pass", "note"])
    for r in report.results:
        params = json.dumps(r.params, sort_keys=True, separators=(",", ":"))
        writer.writerow([
            r.id, params, fmt(r.lhs.real), fmt(r.lhs.imag), fmt(r.rhs.real), fmt(r.rhs.imag),
            fmt(r.abs_err), fmt(r.rel_err), "true" if r.passed else "false", r.note,
        ])
    return buf.getvalue()


def report_plain(report: harness.Report) -> str:
    lines = []
    for r in report.results:
        params = " ".join(f"{k}={_cell(v)}" for k, v in sorted(r.params.items()))
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} {r.id} {params} rel_err={fmt(r.rel_err)}"
        lines.append(line + (f" ({r.note})" if r.note else ""))
    lines.append(f"seed={report.seed} n_pass={report.n_pass} n_fail={report.n_fail}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Argument helpers


def _compile(source: str, variable: str) -> Callable[[complex], complex]:
    return dsl.compile_function(source, variable)


def parse_complex(text: str) -> complex:
    """A constant DSL expression such as ``-1``, ``0.5+2i`` or ``pi/4``."""
    return dsl.evaluate(dsl.parse_expr(text))


def parse_range(text: str) -> range:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            out = range(int(lo), int(hi) + 1)
        else:
            out = range(int(text), int(text) + 1)
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected N or A..B") from None
    if len(out) == 0 or out.start < 0 or out.stop - 1 > TABLE_N_MAX:
        raise UsageError(f"range {text!r} must lie within 0..{TABLE_N_MAX}")
    return out


def parse_grid(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad grid {text!r}; expected comma-separated reals") from None


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _quad_cfg(args) -> QuadratureConfig:
    base = QuadratureConfig()
    return QuadratureConfig(
        abs_tol=base.abs_tol if args.tol_abs is None else args.tol_abs,
        rel_tol=base.rel_tol if args.tol_rel is None else args.tol_rel,
    )


# ---------------------------------------------------------------------------
# Commands


def cmd_eval(args, out) -> int:
    if args.function not in dsl.BUILTINS:
        raise UsageError(f"unknown function {args.function!r}; known: {', '.join(sorted(dsl.BUILTINS))}")
    arity, fn = dsl.BUILTINS[args.function]
    if len(args.args) != arity:
        raise UsageError(f"{args.function} takes {arity} argument(s), got {len(args.args)}")
    values = [parse_complex(a) for a in args.args]
    result = complex(fn(*values))
    emit_records([{"value": result}], args.format or "plain", out, bare=True)
    return EXIT_OK


def _value_record(res) -> dict:
    return {"value": res.value, "error_estimate": res.error_estimate, "evaluations": res.evaluations}


def cmd_mellin(args, out) -> int:
    cfg = _quad_cfg(args)
    if args.direction == "forward":
        if args.s is None:
            raise UsageError("mellin forward needs --s")
        g = _compile(args.expr, "x")
        s = parse_complex(args.s)
        res = mellin_forward(g, s, cfg)
    else:
        if args.x is None:
            raise UsageError("mellin inverse needs --x")
        if not args.x > 0:
            raise UsageError("--x must be positive")
        G = _compile(args.expr, "s")
        sup_f = None
        if args.T is None:
            # treat G as Gamma(s) f(s) and size T from the Gamma line bound
            sup_f = estimate_sup(lambda s: G(s) / gamma(s), args.a)
            T = choose_truncation(args.a, sup_f, cfg.tolerance(1.0))
        else:
            T = args.T
        res = mellin_inverse(G, args.x, VerticalLine(args.a, T), cfg, sup_f=sup_f)
    emit_records([_value_record(res)], args.format or "plain", out)
    if not res.converged or res.error_estimate > cfg.tolerance(abs(res.value)):
        print(f"error: error estimate {fmt(res.error_estimate)} exceeds the requested tolerance", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_residue_sum(args, out) -> int:
    f = _compile(args.expr, "s")
    scfg = SeriesConfig() if args.tol_rel is None else SeriesConfig(rel_tol=args.tol_rel)
    res = residue_series(f, args.x, scfg)
    record = {"value": res.value, "error_estimate": res.error_estimate, "terms_used": res.evaluations}
    emit_records([record], args.format or "plain", out)
    return EXIT_OK


def cmd_master_check(args, out) -> int:
    f = _compile(args.f, "s")
    profile = _compile(args.profile, "x") if args.profile else None
    s = parse_complex(args.s)
    lhs, rhs = master_theorem_sides(f, s, _quad_cfg(args), profile=profile)
    residual = abs(lhs.value - rhs)
    tol = MASTER_TOL if args.tol_abs is None else args.tol_abs
    if args.tol_rel is not None:
        tol = max(tol, args.tol_rel * abs(rhs))
    record = {"lhs": lhs.value, "rhs": rhs, "residual": residual, "error_estimate": lhs.error_estimate}
    emit_records([record], args.format or "plain", out)
    if not residual <= tol:
        print(f"error: residual {fmt(residual)} exceeds tolerance {fmt(tol)}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    tols = {"tol_abs": args.tol_abs, "tol_rel": args.tol_rel}
    if args.identity is None:
        report = harness.run_all(args.samples, args.seed, **tols)
    else:
        report = harness.run_identity(args.identity, args.samples, args.seed, **tols)
    fmt_name = args.format or "json"
    if fmt_name == "json":
        out.write(report.to_json(timing=args.timing) + "\n")
    elif fmt_name == "csv":
        out.write(report_csv(report))
    else:
        out.write(report_plain(report))
    if not args.quiet:
        print(f"{report.n_pass} passed, {report.n_fail} failed", file=sys.stderr)
    return EXIT_OK if report.n_fail == 0 else EXIT_NUMERIC


def _zeta_row(n, z):
    return hurwitz_zeta_neg_int(n, z)


TABLES: dict[str, tuple[bool, Callable]] = {
    # family -> (uses z, value(n, z))
    "zeta-neg": (True, _zeta_row),
    "eta-neg": (True, lambda n, z: 0.5 * euler_poly(n, z)),
    "L-neg": (False, lambda n, z: complex(0.5 * euler_numbers(2 * n)[2 * n])),
    "bell": (True, lambda n, z: exp_poly(n, z)),
    "hermite": (True, lambda n, z: hermite(n, z)),
    "bernoulli": (True, lambda n, z: bernoulli_poly(n, z)),
    "euler": (True, lambda n, z: euler_poly(n, z)),
}


def cmd_table(args, out) -> int:
    ns = parse_range(args.n)
    uses_z, value = TABLES[args.family]
    zs = parse_grid(args.z) if uses_z else [None]
    records = []
    for n in ns:
        for z in zs:
            v = complex(value(n, z))
            row = {"n": n}
            if uses_z:
                row["z"] = z
            row["value"] = v.real if v.imag == 0 else v
            records.append(row)
    fmt_name = args.format or "plain"
    emit_records(records, fmt_name, out, bare=True, many=True)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def _add_common(p: argparse.ArgumentParser, top: bool) -> None:
    # On subcommands the defaults are suppressed so a flag given before the
    # subcommand is not reset by the subparser.
    def d(value):
        return value if top else argparse.SUPPRESS

    g = p.add_argument_group("common options")
    g.add_argument("--format", choices=("json", "csv", "plain"), default=d(None),
                   help="output format (default: json for verify, plain otherwise)")
    g.add_argument("--tol-rel", type=float, default=d(None),
                   help="relative tolerance (default: the command's own)")
    g.add_argument("--tol-abs", type=float, default=d(None),
                   help=f"absolute tolerance (default: the command's own; {MASTER_TOL:g} for master-check)")
    g.add_argument("--seed", type=int, default=d(None), help=f"sampling seed (default: ${SEED_ENV}, else 0)")
    g.add_argument("--samples", type=int, default=d(DEFAULT_SAMPLES),
                   help=f"samples per identity (default: {DEFAULT_SAMPLES})")
    g.add_argument("--quiet", action="store_true", default=d(False), help="suppress the summary on stderr")


class _HelpFormatter(argparse.RawDescriptionHelpFormatter, argparse.ArgumentDefaultsHelpFormatter):
    pass


def _grammar_help() -> str:
    body = dsl.__doc__.split("::\n", 1)[1]
    heading = f"expression grammar (version {dsl.GRAMMAR_VERSION}), lowest precedence first:"
    return f"{heading}\n{body}builtins: {', '.join(sorted(dsl.BUILTINS))}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mellinkit", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter, epilog=_grammar_help(),
                                     allow_abbrev=False)
    _add_common(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    fmt_cls = _HelpFormatter

    p = sub.add_parser("eval", help="evaluate a builtin function", formatter_class=fmt_cls, allow_abbrev=False)
    p.add_argument("function", help="builtin name, e.g. zeta, gamma, eta, L, hermite, bell")
    p.add_argument("args", nargs="*", help="arguments as constant expressions (use -- before negatives)")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("mellin", help="forward or inverse Mellin transform", formatter_class=fmt_cls, allow_abbrev=False)
    p.add_argument("direction", choices=("forward", "inverse"))
    p.add_argument("expr", help="g(x) for forward, G(s) for inverse")
    p.add_argument("--s", help="transform variable for forward (complex expression)")
    p.add_argument("--x", type=float, help="evaluation point for inverse")
    p.add_argument("--a", type=float, default=0.5, help="abscissa of the inversion line")
    p.add_argument("--T", type=float, default=None,
                   help="truncation height; by default chosen from the Gamma line bound")
    p.set_defaults(handler=cmd_mellin)

    p = sub.add_parser("residue-sum", help="sum (-1)^n/n! f(-n) x^n", formatter_class=fmt_cls, allow_abbrev=False)
    p.add_argument("expr", help="f(s)")
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(handler=cmd_residue_sum)

    p = sub.add_parser("master-check", help="Ramanujan Master Theorem residual", formatter_class=fmt_cls, allow_abbrev=False)
    p.add_argument("--f", required=True, help="f(s); the series uses f(n), the closed side f(-s)")
    p.add_argument("--s", required=True, help="point with 0 < Re(s) < 1")
    p.add_argument("--profile", default=None,
                   help="closed form of sum f(n)(-x)^n/n! in x, used where the series is unusable")
    p.set_defaults(handler=cmd_master_check)

    p = sub.add_parser("verify", help="run the identity harness", formatter_class=fmt_cls, allow_abbrev=False)
    p.add_argument("--identity", default=None, help="identity id or group (e.g. I2a, I4); all if omitted")
    p.add_argument("--timing", action="store_true", help="record wall time in the JSON report")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("table", help="special-value tables", formatter_class=fmt_cls, allow_abbrev=False)
    p.add_argument("family", choices=tuple(TABLES))
    p.add_argument("--n", default="0..5", help=f"index N or range A..B within 0..{TABLE_N_MAX}")
    p.add_argument("--z", default="1", help="comma-separated z grid")
    p.set_defaults(handler=cmd_table)

    for action in sub.choices.values():
        _add_common(action, top=False)
    return parser


def _report_parse_error(exc: ParseError, source: str | None) -> None:
    col = exc.position + 1
    print(f"parse error: {exc.message} at column {col}", file=sys.stderr)
    if source is not None:
        print(f"  {source}", file=sys.stderr)
        print("  " + " " * exc.position + "^", file=sys.stderr)


def _sources(args) -> list[str]:
    return [getattr(args, k) for k in ("expr", "f", "profile", "s") if isinstance(getattr(args, k, None), str)]


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        return args.handler(args, out)
    except ParseError as exc:
        source = next((s for s in _sources(args) if _fails_at(s, exc)), None)
        _report_parse_error(exc, source)
        return EXIT_USAGE
    except (UsageError, UnknownIdentity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except MellinError as exc:
        # domain errors and unbound names are caller mistakes
        where = f" (column {exc.position + 1})" if exc.position is not None else ""
        print(f"error: {exc}{where}", file=sys.stderr)
        return EXIT_USAGE


def _fails_at(source: str, exc: ParseError) -> bool:
    try:
        dsl.parse_expr(source)
    except ParseError as other:
        return other.position == exc.position
    return False


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
