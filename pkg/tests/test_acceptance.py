"""Acceptance criteria 1-8, one PASS/FAIL line each at the stated bound.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from p1cert.certificates import verify_asl2, verify_asl20, verify_formules, verify_galois_trichotomy, verify_prim, verify_prim0
from p1cert.certificates.asl2 import RATIONAL_A, RATIONAL_B
from p1cert.certificates.witnesses import decode
from p1cert.cli import main
from p1cert.expr.parsing import parse_ratexpr
from p1cert.expr.ratexpr import RatExpr
from p1cert.objects import X0, X0_B, X1, u_A, u_B, y, yp
from p1cert.solvers import poly_ansatz, solve_transport
from p1cert.solvers.darboux import darboux_search, rational_first_integrals
from p1cert.solvers.riccati import riccati_rational_solutions

from oracle_cases import oracle_property
from properties import property_tests

LOG: list[str] = []


@pytest.fixture(autouse=True)
def _share_log(acceptance_log):
    yield
    for line in LOG:
        if line not in acceptance_log:
            acceptance_log.append(line)


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    LOG.append(line)
    print(line)
    return ok


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_criterion_1_exterior_identities():
    props = property_tests(100)
    failures = []

    def run():
        for name, prop in props.items():
            try:
                prop()
            except AssertionError as exc:
                failures.append(f"{name}: {exc}")

    _, dt = _timed(run)
    ok = not failures and dt < 60
    assert record(1, ok, f"{len(props)} identities x 100 exact instances, {dt:.1f} s (< 60 s) {'; '.join(failures)}")


def test_criterion_2_formules():
    rep, dt = _timed(lambda: verify_formules(10))
    assert record(2, rep.status == "verified" and dt < 5, f"verify_formules(10) {rep.status}, {dt:.2f} s (< 5 s)")


def test_criterion_3_x0_controls():
    def run():
        fi3 = rational_first_integrals(X0, 3).contains(u_A)
        fi6 = rational_first_integrals(X0, 6).contains(u_A**2)
        dar = darboux_search(X0, 3, 1).contains(u_A, 0)
        prim0 = verify_prim0((0, 1, 2)).status == "verified"
        return fi3, fi6, dar, prim0

    (fi3, fi6, dar, prim0), dt = _timed(run)
    ok = fi3 and fi6 and dar and prim0 and dt < 120
    assert record(3, ok, f"u in FI(X0,3) {fi3}, u^2 in FI(X0,6) {fi6}, (u,0) in Darboux(X0,3,1) {dar}, prim0 f in {{1,u,u^2}} {prim0}, {dt:.1f} s (< 120 s)")


@pytest.mark.xfail(
    strict=True,
    reason="the asl20 transport solves admit rational Riccati solutions c = -1/(3u), -7/(6u); see the decisions ledger",
)
def test_criterion_4_x1_exclusions():
    parts = {}
    times = {}
    r, times["FI"] = _timed(lambda: rational_first_integrals(X1, 3))
    parts["rational_first_integrals(X1,3) empty"] = r.is_empty
    r, times["darboux"] = _timed(lambda: darboux_search(X1, 5, 1))
    parts["darboux_search(X1,5,1) empty"] = r.status == "complete" and not r.pairs
    r, times["prim"] = _timed(verify_prim)
    parts["verify_prim verified"] = r.status == "verified"
    r, times["asl20"] = _timed(verify_asl20)
    conclusive = any("conclusive" in c.desc and c.passed for c in r.checks)
    parts[f"verify_asl20 verified ({r.status}; witnesses {', '.join(decode(w)[2][0] for w in r.witnesses if w.startswith('riccati'))})"] = r.status == "verified" and conclusive
    r, times["asl2"] = _timed(verify_asl2)
    parts["verify_asl2 verified"] = r.status == "verified"
    slow = [k for k, v in times.items() if v >= 600]
    ok = all(parts.values()) and not slow
    detail = "; ".join(f"{k}: {'ok' if v else 'NO'}" for k, v in parts.items())
    detail += f"; max {max(times.values()):.1f} s (< 600 s each)"
    assert record(4, ok, detail)


def test_criterion_5_trichotomy():
    rep, dt = _timed(verify_galois_trichotomy)
    ctrl = verify_galois_trichotomy("X0")
    w = decode(ctrl.witnesses[0]) if ctrl.witnesses else None
    is_u = False
    if w and w[0] == "first-integral":
        q = parse_ratexpr(w[2][0]) / u_A
        is_u = q.is_constant() and not q.is_zero
    first = ctrl.parameters.get("transitif_status") == "refuted" and "prim_status" not in ctrl.parameters
    ok = rep.status == "verified" and ctrl.status == "refuted" and first and is_u
    assert record(5, ok, f"X1 {rep.status}; X0 {ctrl.status} at the first-integral branch {first} with witness u {is_u}")


def test_criterion_6_oracle_equivalence():
    prop = oracle_property(20)
    try:
        prop()
        ok, err = True, ""
    except AssertionError as exc:
        ok, err = False, str(exc)
    assert record(6, ok, f"solve_transport vs dense sympy oracle on 20 instances (<= 60 atoms), RREF equality {err}")


def _strip_timing(d: Path) -> dict[str, str]:
    out = {}
    for p in sorted(d.glob("*.json")):
        data = json.loads(p.read_text())
        data.pop("elapsed_ms", None)
        out[p.name] = json.dumps(data, sort_keys=True, indent=2)
    return out


def test_criterion_7_determinism(tmp_path, capsys):
    codes = [main(["verify-all", "--out", str(tmp_path / f"run{i}")]) for i in (1, 2)]
    capsys.readouterr()
    a, b = _strip_timing(tmp_path / "run1"), _strip_timing(tmp_path / "run2")
    ok = len(a) == 9 and a == b
    assert record(7, ok, f"two verify-all runs, {len(a)} files, identical excluding elapsed_ms: {a == b} (exit codes {codes})")


def test_criterion_8_embedded_lemmas():
    def run():
        r1 = solve_transport(X0, y, poly_ansatz(8))
        r2a = solve_transport(X0, y / yp**2, RATIONAL_A)
        r2b = solve_transport(X0_B, y / (4 * y**3 + u_B), RATIONAL_B)
        r3 = riccati_rational_solutions(RatExpr.const(Fraction(7, 18)) / u_B**3, -RatExpr.one(), 8)
        return r1, r2a, r2b, r3

    (r1, r2a, r2b, r3), dt = _timed(run)
    ok = r1.is_empty and r2a.is_empty and r2b.is_empty and r3.is_empty and r3.conclusive and dt < 120
    assert record(
        8,
        ok,
        f"X0 R = y (deg <= 8) {r1.status}; X0 R = y/y'^2 rational {r2a.status} (A), {r2b.status} (B); "
        f"2c' - 7/(9u^3) = -2c^2 {'empty' if r3.is_empty else 'found'} conclusive {r3.conclusive}; {dt:.1f} s (< 120 s)",
    )


if __name__ == "__main__":
    import tempfile

    import conftest  # noqa: F401  registers the exact hypothesis profile

    class _Caps:
        def readouterr(self):
            return None

    tests = [
        test_criterion_1_exterior_identities,
        test_criterion_2_formules,
        test_criterion_3_x0_controls,
        test_criterion_4_x1_exclusions,
        test_criterion_5_trichotomy,
        test_criterion_6_oracle_equivalence,
        test_criterion_8_embedded_lemmas,
    ]
    for t in tests:
        try:
            t()
        except AssertionError:
            pass
    with tempfile.TemporaryDirectory() as d:
        try:
            test_criterion_7_determinism(Path(d), _Caps())
        except AssertionError:
            pass
    sys.exit(0 if all(": PASS" in line for line in LOG) else 1)
