"""Command-line entry point: certificates, solvers on user input, reports.

Exit codes: 0 verified or solve completed as expected, 1 refuted or a
counterexample, 2 undetermined (a cap was hit), 3 usage, parse or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import objects
from .certificates import REGISTRY, index_json, run_all, write_reports
from .certificates.report import EXIT_CODES, CertificateReport, write_atomic
from .exterior import FormMatrix, KForm, VectorField, apply_field, chart_convert, column
from .expr.parsing import ParseError, parse_expr, parse_ratexpr
from .expr.ratexpr import Chart, RatExpr
from .solvers import AnsatzError, AnsatzSpec, poly_ansatz, solve_transport

ENV_REPORT_DIR = "P1CERT_REPORT_DIR"
EXIT_USAGE = 3


class UsageError(Exception):
    """Bad command line or unparsable input; maps to exit 3."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


# ---------------------------------------------------------------- inputs


def _chart(text: str) -> Chart:
    try:
        return Chart(text.upper().replace("CHART_", ""))
    except ValueError:
        raise UsageError(f"unknown chart {text!r}; use A or B") from None


def field_from_args(args) -> tuple[str, VectorField]:
    """The named field, or the one given by ``--field-expr "x=1, y=yp, yp=6*y^2"``."""
    chart = _chart(args.chart)
    if args.field_expr:
        comps = {}
        for part in args.field_expr.split(","):
            name, sep, expr = part.partition("=")
            if not sep:
                raise UsageError(f"field component {part.strip()!r} is not of the form coord=expr")
            comps[name.strip()] = parse_ratexpr(expr, chart)
        try:
            return args.field_expr, VectorField(chart, comps)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.field not in objects.FIELDS:
        raise UsageError(f"unknown field {args.field!r}; known: {', '.join(objects.FIELDS)}")
    X = objects.FIELDS[args.field]
    return args.field, (X if chart is X.chart else chart_convert(X, chart))


def _kv(items: Sequence[str] | None, what: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for item in items or ():
        for part in item.split(","):
            key, sep, val = part.partition("=")
            if not sep:
                raise UsageError(f"{what} entry {part!r} is not key=value")
            try:
                out[key.strip()] = json.loads(val)
            except json.JSONDecodeError:
                out[key.strip()] = val.strip()
    return out


def ansatz_from_args(args, chart: Chart, default_total: int) -> AnsatzSpec:
    try:
        if args.ansatz:
            text = Path(args.ansatz[1:]).read_text() if args.ansatz.startswith("@") else args.ansatz
            return AnsatzSpec.from_json(text)
        deg = _kv(args.deg, "--deg")
        if not deg:
            total = args.total if args.total is not None else default_total
            return poly_ansatz(total, chart, args.weight)
        return AnsatzSpec(
            deg=deg,
            laurent=_kv(args.laurent, "--laurent"),
            weight=args.weight,
            total=args.total,
            chart=chart,
            den=args.den,
            den_power=args.den_power if args.den else 0,
        )
    except (AnsatzError, json.JSONDecodeError, TypeError) as exc:
        raise UsageError(f"bad ansatz: {exc}") from None


def _omega0(name: str | None, expr: str | None) -> tuple[str, FormMatrix]:
    if expr:
        forms = [parse_expr(t, Chart.A) for t in expr.split(";")]
        if len(forms) != 2 or any(isinstance(f, RatExpr) for f in forms):
            raise UsageError("--omega0-expr needs two 1-forms separated by ';'")
        return expr, column(forms)
    table = {"Omega0": objects.Omega0, "Omega0_0": objects.Omega0_0, "Omega0_alpha": objects.Omega0_alpha}
    if name not in table:
        raise UsageError(f"unknown Omega0 {name!r}; known: {', '.join(table)}")
    return name, table[name]


# ---------------------------------------------------------------- output


def solver_report(command: str, status: str, exit_code: int, parameters: dict, **extra) -> dict[str, Any]:
    rep = {"command": command, "status": status, "exit_code": exit_code, "parameters": parameters}
    rep.update(extra)
    return rep


def _solver_text(rep: dict[str, Any]) -> str:
    lines = [f"[{rep['status']}] {rep['command']}"]
    for k, v in rep["parameters"].items():
        lines.append(f"  {k}: {json.dumps(v, sort_keys=True) if not isinstance(v, str) else v}")
    for k, v in rep.items():
        if k in ("command", "status", "exit_code", "parameters"):
            continue
        if isinstance(v, list):
            lines.append(f"  {k}: {len(v)}")
            lines.extend(f"    {json.dumps(i, sort_keys=True) if not isinstance(i, str) else i}" for i in v)
        else:
            lines.append(f"  {k}: {v}")
    return "\n".join(lines)


def emit(args, payload: dict[str, Any] | CertificateReport, name: str) -> None:
    if isinstance(payload, CertificateReport):
        text = payload.dumps() if args.format == "json" else payload.to_text() + "\n"
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n" if args.format == "json" else _solver_text(payload) + "\n"
    sys.stdout.write(text)
    out = getattr(args, "out", None)
    if out:
        p = Path(out)
        if p.suffix != ".json" or p.is_dir():
            p = p / f"{name}.json"
        p.parent.mkdir(parents=True, exist_ok=True)
        data = payload.dumps() if isinstance(payload, CertificateReport) else json.dumps(payload, sort_keys=True, indent=2) + "\n"
        write_atomic(p, data)


def _expected(found: bool, expect: str | None) -> int:
    if expect is None:
        return 0
    return 0 if (expect == "found") == found else 1


# ---------------------------------------------------------------- commands


def cmd_verify_all(args) -> int:
    out = args.out or os.environ.get(ENV_REPORT_DIR)
    reports = run_all(None)
    if out:
        write_reports(reports, Path(out), timing=not args.no_timing)
    if args.format == "json":
        sys.stdout.write(json.dumps(index_json(reports), sort_keys=True, indent=2) + "\n")
    else:
        for r in reports:
            sys.stdout.write(f"{r.status:<12} {r.id:<12} {sum(c.passed for c in r.checks)}/{len(r.checks)} checks, {len(r.witnesses)} witnesses\n")
    if args.figures:
        from .figures import write_summary

        for p in write_summary(reports, Path(args.figures)):
            sys.stderr.write(f"wrote {p}\n")
    return EXIT_CODES[index_json(reports)["status"]]


def cmd_verify(args) -> int:
    kwargs = _kv(args.set, "--set")
    if args.field:
        kwargs["field"] = args.field
    for key, val in list(kwargs.items()):
        if isinstance(val, list) and key in ("exponents", "n_range", "alpha_degrees", "fs"):
            kwargs[key] = tuple(val)
    try:
        rep = REGISTRY[args.id](**kwargs)
    except TypeError as exc:
        raise UsageError(f"bad parameters for {args.id}: {exc}") from None
    except KeyError as exc:
        raise UsageError(f"unknown name {exc}") from None
    out = args.out or os.environ.get(ENV_REPORT_DIR)
    args.out = out
    emit(args, rep, rep.id)
    return EXIT_CODES[rep.status]


def cmd_transport(args) -> int:
    name, X = field_from_args(args)
    g = parse_ratexpr(args.rhs, X.chart)
    spec = ansatz_from_args(args, X.chart, 8)
    res = solve_transport(X, g, spec, cap=args.cap)
    code = 2 if res.is_undetermined else _expected(res.status == "affine", args.expect)
    texts = res.texts()
    rep = solver_report(
        "transport",
        res.status,
        code,
        {"field": name, "rhs": g.to_text(), "ansatz": spec.to_json(), "atoms": len(spec.atoms())},
        particular=texts["particular"],
        kernel=texts["kernel"],
        reason=res.reason,
    )
    emit(args, rep, "transport")
    return code


def cmd_darboux(args) -> int:
    from .solvers.darboux import darboux_search

    name, X = field_from_args(args)
    res = darboux_search(X, args.degP, args.degL, include_alpha=args.include_alpha or None, branch_cap=args.branch_cap)
    pairs = [[p.to_text(), l.to_text()] for p, l in res.pairs]
    status = "undetermined" if res.status == "undetermined" else ("found" if pairs else "empty")
    code = 2 if status == "undetermined" else _expected(bool(pairs), args.expect)
    rep = solver_report(
        "darboux",
        status,
        code,
        {"field": name, "degP": args.degP, "degL": args.degL},
        witnesses=pairs,
        cofactor_support=res.cofactor_support,
        reason=res.reason,
    )
    emit(args, rep, "darboux")
    return code


def cmd_first_integral(args) -> int:
    from .solvers.darboux import rational_first_integrals

    name, X = field_from_args(args)
    res = rational_first_integrals(X, args.deg, include_alpha=args.include_alpha or None, branch_cap=args.branch_cap)
    code = 2 if res.status == "undetermined" else _expected(res.status == "found", args.expect)
    rep = solver_report(
        "first-integral",
        res.status,
        code,
        {"field": name, "deg": args.deg},
        witnesses=[w.to_text() for w in res.witnesses],
        reason=res.reason,
    )
    emit(args, rep, "first-integral")
    return code


def cmd_riccati(args) -> int:
    from .solvers.riccati import riccati_rational_solutions

    p = parse_ratexpr(args.p, Chart.B)
    q = parse_ratexpr(args.q, Chart.B)
    r = parse_ratexpr(args.r, Chart.B) if args.r else None
    try:
        res = riccati_rational_solutions(p, q, args.bound, r)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if res.solutions:
        status = "found"
    else:
        status = "empty" if res.conclusive else "undetermined"
    code = 2 if status == "undetermined" else _expected(bool(res.solutions), args.expect)
    rep = solver_report(
        "riccati",
        status,
        code,
        {"equation": "c' = p + r c + q c^2", "p": p.to_text(), "q": q.to_text(), "r": r.to_text() if r else "0", "bound": args.bound},
        witnesses=[c.to_text() for c in res.solutions],
        conclusive=res.conclusive,
        family=res.family,
        reason=res.reason,
    )
    emit(args, rep, "riccati")
    return code


def cmd_asl2(args) -> int:
    from .certificates.asl20 import HOMOGENEOUS_ANSATZ, RING_ANSATZ
    from .solvers.asl2 import asl2_extend

    name, O0 = _omega0(args.omega0, args.omega0_expr)
    presets = {"homogeneous": HOMOGENEOUS_ANSATZ, "ring": RING_ANSATZ}
    if args.ansatz in presets:
        spec = presets[args.ansatz]
    else:
        try:
            text = Path(args.ansatz[1:]).read_text() if args.ansatz.startswith("@") else args.ansatz
            spec = AnsatzSpec.from_json(text)
        except (AnsatzError, json.JSONDecodeError, TypeError) as exc:
            raise UsageError(f"bad ansatz: {exc}") from None
    try:
        res = asl2_extend(O0, spec, step_cap=args.step_cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    code = 2 if res.status == "undetermined" else _expected(res.status == "found", args.expect)
    rep = solver_report(
        "asl2",
        res.status,
        code,
        {"omega0": name, "ansatz": spec.to_json()},
        witnesses=[w.to_text() for w in res.witnesses],
        families=res.families,
        reason=res.reason,
        steps=res.steps,
    )
    emit(args, rep, "asl2")
    return code


EQUATIONS = ("dOmega0 - Omega1^Omega0", "dOmega1 - Omega1^Omega1")


def cmd_gv_check(args) -> int:
    from .solvers.gv import asl2_defects

    name, O0 = _omega0(args.omega0, args.omega0_expr)
    forms = [parse_expr(t, O0.chart) for t in args.omega1.split(";")]
    if len(forms) != 4:
        raise UsageError("--omega1 needs four 1-forms separated by ';' (row-major)")
    forms = [KForm(O0.chart, 1) if isinstance(f, RatExpr) and f.is_zero else f for f in forms]
    if any(isinstance(f, RatExpr) for f in forms):
        raise UsageError("--omega1 entries must be 1-forms or 0")
    M = FormMatrix([[forms[0], forms[1]], [forms[2], forms[3]]], O0.chart)
    defects = asl2_defects(O0, M)
    trace_zero = M.trace().is_zero
    ok = not defects and trace_zero
    code = 0 if ok else 1
    rep = solver_report(
        "gv-check",
        "satisfied" if ok else "defects",
        code,
        {"omega0": name, "omega1": M.to_text()},
        trace_zero=trace_zero,
        witnesses=[{"equation": EQUATIONS[eq], "entry": idx, "defect": f.to_text()} for (eq, idx), f in defects],
    )
    emit(args, rep, "gv-check")
    return code


def cmd_eval(args) -> int:
    chart = _chart(args.chart)
    value = parse_expr(args.expr, chart)
    ops = []
    if args.apply:
        args.field_expr = None
        args.field = args.apply
        _, X = field_from_args(args)
        if not isinstance(value, RatExpr):
            raise UsageError("--apply needs a function")
        value = apply_field(X, value)
        ops.append(f"apply {args.apply}")
    if args.d:
        if isinstance(value, RatExpr):
            from .exterior import differential

            value = differential(value, chart)
        else:
            value = value.d()
        ops.append("d")
    if args.interior:
        args.field_expr = None
        args.field = args.interior
        _, X = field_from_args(args)
        if isinstance(value, RatExpr):
            raise UsageError("--interior needs a form")
        value = value.interior(X)
        ops.append(f"interior {args.interior}")
    text = value.to_text()
    rep = solver_report("eval", "ok", 0, {"expr": args.expr, "chart": str(chart), "ops": ops}, value=text)
    if args.format == "text":
        sys.stdout.write(text + "\n")
    else:
        sys.stdout.write(json.dumps(rep, sort_keys=True, indent=2) + "\n")
    return 0


# ---------------------------------------------------------------- parser


def _field_opts(p: argparse.ArgumentParser, default: str = "X1") -> None:
    p.add_argument("--field", default=default, help="named field: " + ", ".join(objects.FIELDS))
    p.add_argument("--field-expr", help='components, e.g. "x=1, y=yp, yp=6*y^2+x"')
    p.add_argument("--chart", default="A", help="chart A (x, y, yp, alpha) or B (x, y, u, s)")


def _common(p: argparse.ArgumentParser, out: bool = True) -> None:
    p.add_argument("--format", choices=("json", "text"), default="json")
    if out:
        p.add_argument("--out", help="report file or directory")


def _expect(p: argparse.ArgumentParser) -> None:
    p.add_argument("--expect", choices=("empty", "found"), help="exit 1 when the outcome differs")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="p1cert", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-all", help="run every certificate and write reports plus index.json")
    _common(p)
    p.add_argument("--no-timing", action="store_true", help="omit elapsed_ms from report files")
    p.add_argument("--figures", metavar="DIR", help="write summary.tsv and, with matplotlib, figures")
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("verify", help="run one certificate")
    p.add_argument("id", choices=list(REGISTRY))
    p.add_argument("--field", help="field for certificates that take one (X0 control, X1)")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a bound (JSON value)")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("transport", help="solve X R = g inside an ansatz")
    _field_opts(p)
    p.add_argument("--rhs", required=True)
    p.add_argument("--ansatz", help="AnsatzSpec JSON or @file")
    p.add_argument("--deg", action="append", metavar="VAR=N")
    p.add_argument("--laurent", action="append", metavar="VAR=N")
    p.add_argument("--total", type=int)
    p.add_argument("--weight", type=int)
    p.add_argument("--den")
    p.add_argument("--den-power", type=int, default=1)
    p.add_argument("--cap", type=int, default=20000)
    _expect(p)
    _common(p)
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("darboux", help="Darboux polynomials with cofactors")
    _field_opts(p)
    p.add_argument("--degP", type=int, default=5)
    p.add_argument("--degL", type=int, default=1)
    p.add_argument("--include-alpha", action="store_true")
    p.add_argument("--branch-cap", type=int, default=10_000)
    _expect(p)
    _common(p)
    p.set_defaults(func=cmd_darboux)

    p = sub.add_parser("first-integral", help="rational first integrals P/Q")
    _field_opts(p)
    p.add_argument("--deg", type=int, default=3)
    p.add_argument("--include-alpha", action="store_true")
    p.add_argument("--branch-cap", type=int, default=10_000)
    _expect(p)
    _common(p)
    p.set_defaults(func=cmd_first_integral)

    p = sub.add_parser("riccati", help="rational solutions of c' = p + r c + q c^2 in u")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--r")
    p.add_argument("--bound", type=int, default=8)
    _expect(p)
    _common(p)
    p.set_defaults(func=cmd_riccati)

    p = sub.add_parser("asl2", help="search trace-zero Omega1 completing Omega0 to an asl2 pair")
    p.add_argument("--omega0", default="Omega0")
    p.add_argument("--omega0-expr", help="two 1-forms separated by ';'")
    p.add_argument("--ansatz", default="homogeneous", help="homogeneous, ring, AnsatzSpec JSON or @file")
    p.add_argument("--step-cap", type=int, default=10_000)
    _expect(p)
    _common(p)
    p.set_defaults(func=cmd_asl2)

    p = sub.add_parser("gv-check", help="structure-equation defects of a pair (Omega0, Omega1)")
    p.add_argument("--omega0", default="Omega0")
    p.add_argument("--omega0-expr")
    p.add_argument("--omega1", required=True, help="four 1-forms a;b;c;d, row-major")
    _common(p)
    p.set_defaults(func=cmd_gv_check)

    p = sub.add_parser("eval", help="canonicalize an expression, optionally apply d, a field or an interior product")
    p.add_argument("expr")
    p.add_argument("--chart", default="A")
    p.add_argument("--apply", metavar="FIELD")
    p.add_argument("--d", action="store_true")
    p.add_argument("--interior", metavar="FIELD")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_eval)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, ParseError) as exc:
        sys.stderr.write(f"p1cert: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"p1cert: I/O error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
