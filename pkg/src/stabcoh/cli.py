"""Command-line front end: ``stabcoh <command> [flags]``.

Exit status: 0 on success or PASS, 1 on a verification failure, 2 on invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .charts import SCHEMA_VERSION, load_chart, verify_chart
from .cobar import load_cocycle, verify_cocycle
from .cohomology import cohomology, internal_degrees, poincare_polynomial
from .dga import dga_presentation
from .exactalg import StructuralError
from .lie import (
    Family,
    LieParams,
    adjoint_failures,
    antisymmetry_failures,
    iota_bracket_failures,
    iota_restriction_failures,
    jacobi_failures,
    lie_presentation,
    ravenel_number,
)
from .regrade import compare_topological_table, compare_v3_series
from .sweep import run_sweep


class InvalidInput(Exception):
    pass


def _emit(out, fmt: str, payload: dict, text_lines: list[str], csv_rows: list[list] | None = None):
    if fmt == "json":
        payload = {"schema_version": SCHEMA_VERSION, "version": __version__, **payload}
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in csv_rows or [[line] for line in text_lines]:
            writer.writerow(row)
        out.write(buf.getvalue())
    else:
        out.write("\n".join(text_lines) + "\n")


def _params(args) -> LieParams:
    if args.p is None or args.n is None or args.m is None:
        raise InvalidInput("--p, --n and --m are required")
    try:
        if args.family == "plain":
            if (args.e, args.f, args.omega_exp) != (1, 1, 0):
                raise InvalidInput("--e, --f and --omega-exp apply to --family formal-module only")
            return LieParams.plain(args.p, args.n, args.m)
        return LieParams.formal_module(args.p, args.e, args.f, args.n, args.m, args.omega_exp)
    except StructuralError as exc:
        raise InvalidInput(str(exc)) from exc


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError as exc:
        raise InvalidInput(f"--window expects LO:HI, got {text!r}") from exc
    if lo > hi:
        raise InvalidInput("empty window")
    return lo, hi


def _require_prime(p):
    if p is None:
        raise InvalidInput("--p is required")
    try:
        LieParams.plain(p, 1, 1)
    except StructuralError as exc:
        raise InvalidInput(str(exc)) from exc


def _load(loader, path):
    if path is None:
        raise InvalidInput("a fixture path is required")
    if not Path(path).is_file():
        raise InvalidInput(f"fixture file not found: {path}")
    try:
        return loader(path)
    except (StructuralError, ValueError, KeyError) as exc:
        raise InvalidInput(f"{path}: {exc}") from exc


# -- commands -------------------------------------------------------------------

def cmd_ravenel(args, out) -> int:
    if args.i is None:
        raise InvalidInput("--i is required")
    _require_prime(args.p)
    if args.n is None or args.n < 1:
        raise InvalidInput("--n must be a positive integer")
    value = ravenel_number(args.p, args.n, args.i)
    _emit(out, args.format, {"command": "ravenel", "p": args.p, "n": args.n, "i": args.i, "value": value},
          [str(value)], [["p", "n", "i", "value"], [args.p, args.n, args.i, value]])
    return 0


def cmd_lie_check(args, out) -> int:
    params = _params(args)
    try:
        pres = lie_presentation(params)
    except StructuralError as exc:
        raise InvalidInput(str(exc)) from exc
    checks = {
        "antisymmetry": len(antisymmetry_failures(pres)),
        "jacobi": len(jacobi_failures(pres)),
        "adjoint": len(adjoint_failures(pres)),
    }
    if params.family is Family.FORMAL_MODULE:
        plain = lie_presentation(LieParams.plain(params.p, params.ambient_height, params.m))
        checks["iota-bracket"] = len(iota_bracket_failures(pres, plain))
        checks["iota-restriction"] = len(iota_restriction_failures(pres, plain))
    lines = [f"{'PASS' if v == 0 else 'FAIL'} {k} [{params.label()}]: {v} failures" for k, v in checks.items()]
    _emit(out, args.format, {"command": "lie-check", "params": params.label(), "failures": checks}, lines,
          [["check", "failures"]] + [[k, v] for k, v in checks.items()])
    return 0 if not any(checks.values()) else 1


def cmd_cohomology(args, out) -> int:
    params = _params(args)
    dga = dga_presentation(params)
    blocks = []
    degrees = [args.s] if args.s is not None else range(dga.rank + 1)
    ts = [args.t % dga.internal_modulus] if args.t is not None else internal_degrees(dga)
    for s in degrees:
        for t in ts:
            sp = cohomology(dga, s, t)
            if sp.dimension or (args.s is not None and args.t is not None):
                blocks.append({"s": s, "t": t, "dimension": sp.dimension,
                               "representatives": [repr(r) for r in sp.representatives]})
    lines = [f"H^{{{b['s']},{b['t']}}}: dim {b['dimension']}" + "".join(f"\n    {r}" for r in b["representatives"])
             for b in blocks]
    _emit(out, args.format, {"command": "cohomology", "params": params.label(), "blocks": blocks}, lines,
          [["s", "t", "dimension", "representatives"]]
          + [[b["s"], b["t"], b["dimension"], "; ".join(b["representatives"])] for b in blocks])
    return 0


def cmd_poincare(args, out) -> int:
    params = _params(args)
    poly = poincare_polynomial(dga_presentation(params))
    _emit(out, args.format,
          {"command": "poincare", "params": params.label(), "coefficients": list(poly.coefficients), "total": poly.total},
          [f"{params.label()}: {poly}", f"coefficients {list(poly.coefficients)}, total {poly.total}"],
          [["degree", "dimension"]] + [[k, c] for k, c in enumerate(poly.coefficients)])
    return 0


def cmd_verify_chart(args, out) -> int:
    fixture = _load(load_chart, args.chart)
    _require_prime(args.p)
    if args.p < fixture.min_prime:
        raise InvalidInput(f"{fixture.chart} requires p >= {fixture.min_prime} (got p={args.p})")
    report = verify_chart(fixture, args.p)
    lines = report.lines() + [report.summary()]
    _emit(out, args.format, {"command": "verify-chart", **report.to_json()}, lines,
          [["status", "chart", "row", "check", "detail"]]
          + [["PASS" if r.passed else "FAIL", report.chart, r.row or "", r.check, r.detail] for r in report.results])
    return 0 if report.passed else 1


def cmd_verify_cocycle(args, out) -> int:
    fixture = _load(load_cocycle, args.fixture)
    _require_prime(args.p)
    if args.p < fixture.min_prime:
        raise InvalidInput(f"fixture {fixture.name} requires p >= {fixture.min_prime} (got p={args.p})")
    rep = verify_cocycle(fixture, args.p)
    _emit(out, args.format, {"command": "verify-cocycle", **rep.to_json()}, [rep.line()],
          [["status", "fixture", "class", "p"], ["PASS" if rep.passed else "FAIL", rep.name, rep.cls, rep.p]])
    return 0 if rep.passed else 1


def cmd_regrade(args, out) -> int:
    fixture = _load(load_chart, args.chart)
    _require_prime(args.p)
    if args.p < fixture.min_prime:
        raise InvalidInput(f"{fixture.chart} requires p >= {fixture.min_prime} (got p={args.p})")
    window = _window(args.window)
    try:
        table = compare_topological_table(fixture, args.p)
        series = compare_v3_series(fixture, args.p, window)
    except StructuralError as exc:
        raise InvalidInput(str(exc)) from exc
    ok = all(r[3] for r in table)
    lines = [
        f"{'PASS' if match else 'FAIL'} {fixture.chart} table row {name}: stated {want}, computed {got}"
        for name, want, got, match in table
    ]
    chosen = series["periods"][args.period]
    lines.append(f"V(3) series on [{window[0]}, {window[1]}] with period {chosen['period']} ({args.period}):")
    lines.append("    chart:   " + " ".join(f"{k}:{v}" for k, v in chosen["chart_series"].items()))
    lines.append("    printed: " + " ".join(f"{k}:{v}" for k, v in chosen["printed_series"].items()))
    for choice, block in series["periods"].items():
        lines.append(f"{'MATCH' if block['match'] else 'DIFFER'} chart vs printed series, period {block['period']} ({choice})"
                     + ("" if block["match"] else f": chart minus printed {block['difference']}"))
    lines.append(f"first factor: {series['first_factor_terms']['chart']} chart terms vs "
                 f"{series['first_factor_terms']['printed']} printed; chart minus printed {series['first_factor_difference']}")
    if series["period_discrepancy"]:
        lines.append(f"NOTE period of v is {series['periods']['default']['period']}, "
                     f"printed series period is {series['periods']['paper']['period']}")
    lines.append(f"{'PASS' if ok else 'FAIL'} {fixture.chart} topological table: {sum(r[3] for r in table)}/{len(table)} rows")
    payload = {
        "command": "regrade",
        "chart": fixture.chart,
        "p": args.p,
        "table": [{"name": n, "stated": list(w), "computed": list(g) if g else None, "match": m} for n, w, g, m in table],
        "table_passed": ok,
        "series": series,
    }
    _emit(out, args.format, payload, lines,
          [["row", "stated_top", "stated_filt", "top", "filt", "match"]]
          + [[n, w[0], w[1], g[0] if g else "", g[1] if g else "", m] for n, w, g, m in table])
    return 0 if ok else 1


def cmd_sweep(args, out) -> int:
    res = run_sweep()
    matrix = res.matrix()
    primes = sorted({k for row in matrix.values() for k in row}, key=lambda s: int(s[2:]))
    width = max(len(k) for k in matrix)
    lines = [" " * width + "  " + "  ".join(f"{p:>6}" for p in primes)]
    for prop, row in matrix.items():
        lines.append(f"{prop:<{width}}  " + "  ".join(f"{row[p] if p in row else '-':>6}" for p in primes))
    lines.append(f"{'PASS' if res.passed else 'FAIL'} sweep: {len(res.records)} records, {res.failures} failures")
    if args.verbose:
        lines = res.lines() + lines
    _emit(out, args.format, {"command": "sweep", **res.to_json()}, lines,
          [["property", "params", "checked", "failures"]] + [[r.prop, r.params, r.checked, r.failures] for r in res.records])
    return 0 if res.passed else 1


COMMANDS = {
    "ravenel": cmd_ravenel,
    "lie-check": cmd_lie_check,
    "cohomology": cmd_cohomology,
    "poincare": cmd_poincare,
    "verify-chart": cmd_verify_chart,
    "verify-cocycle": cmd_verify_cocycle,
    "regrade": cmd_regrade,
    "sweep": cmd_sweep,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InvalidInput(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stabcoh", description="Cohomology of formal-module stabilizer Lie algebras.")
    parser.add_argument("--version", action="version", version=f"stabcoh {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, params=False, chart=False, fixture=False):
        sp.add_argument("--p", type=int)
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
        if params:
            sp.add_argument("--n", type=int)
            sp.add_argument("--m", type=int)
            sp.add_argument("--e", type=int, default=1)
            sp.add_argument("--f", type=int, default=1)
            sp.add_argument("--omega-exp", type=int, default=0)
            sp.add_argument("--family", choices=("plain", "formal-module"), default="plain")
        if chart:
            sp.add_argument("--chart", metavar="PATH")
        if fixture:
            sp.add_argument("--fixture", metavar="PATH")
        return sp

    sp = common(sub.add_parser("ravenel", help="Ravenel number d_{n,i}"))
    sp.add_argument("--n", type=int)
    sp.add_argument("--i", type=int)
    common(sub.add_parser("lie-check", help="restricted Lie algebra axioms (and iota for formal modules)"), params=True)
    sp = common(sub.add_parser("cohomology", help="bigraded cohomology with representatives"), params=True)
    sp.add_argument("--s", type=int)
    sp.add_argument("--t", type=int)
    common(sub.add_parser("poincare", help="Poincare polynomial"), params=True)
    common(sub.add_parser("verify-chart", help="verify a chart fixture"), chart=True)
    common(sub.add_parser("verify-cocycle", help="verify a cobar cocycle fixture"), fixture=True)
    sp = common(sub.add_parser("regrade", help="topological degrees and the windowed V(3) series"), chart=True)
    sp.add_argument("--window", default="-30:30", metavar="LO:HI")
    sp.add_argument("--period", choices=("default", "paper"), default="default")
    sp = sub.add_parser("sweep", help="run the property suite over the parameter grid")
    sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sp.add_argument("--verbose", action="store_true")
    return parser


def _join_window(argv: list[str]) -> list[str]:
    # argparse would read "--window -30:30" as two flags
    out, k = [], 0
    while k < len(argv):
        if argv[k] == "--window" and k + 1 < len(argv):
            out.append(f"--window={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = _join_window(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except InvalidInput as exc:
        print(f"stabcoh: error: {exc}", file=sys.stderr)
        return 2


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
