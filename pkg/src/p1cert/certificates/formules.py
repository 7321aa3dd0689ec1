"""The two power formulas along X0 for x + 2y/y' and 7x + 20y/y' - 24y^4/y'^3."""

from __future__ import annotations

from ..exterior import apply_field
from ..expr.ratexpr import RatExpr
from ..objects import X0, u_A, w1, w2, yp
from .report import CertificateReport, timed
from .witnesses import encode


def formula_defects(n_max: int, c1: int = 3, c2: int = 27) -> list[tuple[int, str]]:
    """(n, which) pairs where X0(w^(n+1)) differs from (n+1) c w^n u^e / y'^(2e)."""
    bad = []
    g1 = RatExpr.const(c1) * u_A / yp**2
    g2 = RatExpr.const(c2) * u_A**2 / yp**4
    p1, p2 = RatExpr.one(), RatExpr.one()  # w^n
    for n in range(n_max + 1):
        if apply_field(X0, p1 * w1) != RatExpr.const(n + 1) * p1 * g1:
            bad.append((n, "w1"))
        if apply_field(X0, p2 * w2) != RatExpr.const(n + 1) * p2 * g2:
            bad.append((n, "w2"))
        p1, p2 = p1 * w1, p2 * w2
    return bad


def verify_formules(n_max: int = 10, *, c1: int = 3, c2: int = 27) -> CertificateReport:
    """Check both power formulas exactly for n = 0..n_max.

    ``c1`` and ``c2`` are the constants on the right-hand side; changing
    them gives the negative control.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    rep = CertificateReport("formules", evidence_kind="bounded-search", parameters={"n_max": n_max, "c1": c1, "c2": c2})
    with timed(rep):
        bad = formula_defects(n_max, c1, c2)
        bad1 = [n for n, w in bad if w == "w1"]
        bad2 = [n for n, w in bad if w == "w2"]
        rep.check(
            f"X0((x+2y/y')^(n+1)) = (n+1)*{c1}u/y'^2*(x+2y/y')^n for n = 0..{n_max}",
            not bad1,
            f"fails at n = {bad1}" if bad1 else "",
        )
        rep.check(
            f"X0((7x+20y/y'-24y^4/y'^3)^(n+1)) = (n+1)*{c2}u^2/y'^4*(...)^n for n = 0..{n_max}",
            not bad2,
            f"fails at n = {bad2}" if bad2 else "",
        )
        if not bad:
            rep.witnesses.append(encode("transport", "X0", RatExpr.const(c1) * u_A / yp**2, w1))
            rep.witnesses.append(encode("transport", "X0", RatExpr.const(c2) * u_A**2 / yp**4, w2))
        rep.note("symbolic n would need coefficients polynomial in n; only n = 0..n_max is checked")
        rep.finish("verified" if rep.all_passed else "refuted")
    return rep


__all__ = ["verify_formules", "formula_defects"]
