"""Invariant algebraic hypersurfaces of X1: bounded Darboux search plus the
weight argument on X_alpha that leaves only cofactor 0."""

from __future__ import annotations

from ..expr.poly import LaurentPoly
from ..expr.ratexpr import RatExpr
from ..objects import FIELDS, Xalpha
from ..solvers import AnsatzSpec, solve_transport
from ..solvers.darboux import admissible_cofactor_monomials, darboux_search
from .prim import normalization_candidates
from .report import CertificateReport, timed
from .witnesses import encode

KERNEL_ANSATZ = AnsatzSpec(deg={"x": 4, "y": 4, "yp": 4, "alpha": 3}, total=6)


def _alpha_only(e: RatExpr) -> bool:
    return e.variables() <= {"alpha"}


def verify_hypeinv(field: str = "X1", degP: int = 5, *, alpha_degrees: range | None = None) -> CertificateReport:
    """Darboux polynomials of ``field`` up to degree ``degP`` plus the X_alpha replay."""
    X = FIELDS[field]
    alpha_degrees = alpha_degrees if alpha_degrees is not None else range(3, degP + 1)
    rep = CertificateReport(
        "hypeinv",
        evidence_kind="both",
        parameters={"field": field, "degP": degP, "degL": 1, "alpha_degrees": list(alpha_degrees), "kernel_ansatz": KERNEL_ANSATZ.to_json()},
    )
    with timed(rep):
        res = darboux_search(X, degP, 1)
        if res.status == "undetermined":
            rep.check(f"darboux_search({field}, {degP}, 1) completes", False, res.reason)
            rep.finish("undetermined")
            return rep
        pairs = res.pairs
        rep.check(
            f"darboux_search({field}, {degP}, 1) finds no invariant hypersurface",
            not pairs,
            "; ".join(f"({p.to_text()}, {l.to_text()})" for p, l in pairs[:4]),
        )
        for p, l in pairs:
            rep.witnesses.append(encode("darboux", field, p, l))
        if field == "X1":
            _replay(rep, alpha_degrees)
        rep.finish("refuted" if pairs else ("verified" if rep.all_passed else "undetermined"))
    return rep


def _replay(rep: CertificateReport, alpha_degrees) -> None:
    support = admissible_cofactor_monomials(Xalpha, 1, [0, 1, 2, 3])
    names = [_mono_text(m) for m in support]
    rep.check(
        "weight pruning leaves alpha as the only degree-1 cofactor monomial for X_alpha",
        names == ["alpha"],
        ", ".join(names),
    )
    cands = [c for c in normalization_candidates() if "x" not in c.variables()]
    rep.check(
        "cofactors of weight -1, degree <= 1 in x, y, y' and free of x: alpha only",
        [c.to_text() for c in cands] == ["alpha"],
        ", ".join(c.to_text() for c in cands),
    )
    rep.note("the candidate alpha has weight -1 and is the one admissible cofactor; the search below rules it out")
    for d in alpha_degrees:
        r = darboux_search(Xalpha, d, 1, include_alpha=True)
        cofs = sorted({l.to_text() for p, l in r.pairs})
        only = r.status == "complete" and all(l.is_zero and _alpha_only(p) for p, l in r.pairs)
        rep.check(
            f"X_alpha Darboux pairs of degree <= {d}: cofactor 0 with P in C[alpha] only",
            only,
            f"cofactors {cofs}" if cofs else "",
        )
    ker = solve_transport(Xalpha, RatExpr.zero(), KERNEL_ANSATZ)
    rep.check(
        "X_alpha P = 0 within the kernel ansatz forces P in C[alpha]",
        ker.status == "affine" and all(_alpha_only(k) for k in ker.kernel),
        f"kernel dim {len(ker.kernel)}",
    )


def _mono_text(m: tuple[int, ...]) -> str:
    return RatExpr(LaurentPoly({m: 1}), canonical=True).to_text()


__all__ = ["verify_hypeinv"]
