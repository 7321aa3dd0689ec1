"""Integrable 1-forms annihilating X0 with i_{X0} d eta = 0."""

from __future__ import annotations

from fractions import Fraction

from ..exterior import KForm, differential
from ..expr.ratexpr import Chart, RatExpr
from ..objects import X0, dx, dy, dyp, u_A, w1, x, y, yp
from ..solvers import AnsatzSpec, solve_linear
from .report import CertificateReport, timed
from .witnesses import encode

du = differential(u_A, Chart.A)
contact = dy - dx.scale(yp)  # dy - y' dx


def family_du(f: RatExpr) -> KForm:
    return du.scale(f)


def family_second(f: RatExpr, third: Fraction = Fraction(1, 3)) -> KForm:
    third = RatExpr.const(third)
    return (dx.scale(u_A) - dy.scale(2 * x * y**2 + yp) + dyp.scale(third * (x * yp + 2 * y))).scale(f)


def invariance_defects(eta: KForm, X=X0) -> list[str]:
    """Which of eta(X) = 0, i_X d eta = 0, eta ^ d eta = 0 fail."""
    bad = []
    if not eta(X).is_zero:
        bad.append("eta(X)")
    deta = eta.d()
    if not deta.interior(X).is_zero:
        bad.append("i_X d eta")
    if not eta.wedge(deta).is_zero:
        bad.append("eta ^ d eta")
    return bad


def ratio_operator(rho: RatExpr) -> RatExpr:
    """-X0(rho) + (6y^2/y') rho, the linear part of the ratio equation."""
    return -X0(rho) + 6 * y**2 / yp * rho


RATIO_RHS = RatExpr.const(Fraction(1, 2)) / yp
RATIO_SOLUTION = -(x * yp + 2 * y) / (6 * u_A)
RATIO_ANSATZ = AnsatzSpec(deg={"x": 2, "y": 3, "yp": 3}, laurent={"yp": -3}, weight=4, den="yp^2-4*y^3", den_power=2)


def _ratio_form_check() -> tuple[bool, str]:
    """eta = rho du + (dy - y'dx) gives eta ^ d eta = E(rho) * kappa * vol with E the ratio equation."""
    zero = RatExpr.zero()
    probes = [zero, x, y / yp, x * y + yp, u_A.inverse()]
    kappa = None
    for rho in probes:
        eta = du.scale(rho) + contact
        top = eta.wedge(eta.d()).coefficient((0, 1, 2))
        e = ratio_operator(rho) - RATIO_RHS
        if e.is_zero:
            if not top.is_zero:
                return False, f"nonzero top form with E = 0 at rho = {rho.to_text()}"
            continue
        k = top / e
        if kappa is None:
            kappa = k
        elif k != kappa:
            return False, f"ratio not proportional at rho = {rho.to_text()}"
    return True, f"kappa = {kappa.to_text()}"


def verify_prim0(
    fs: tuple[int, ...] = (0, 1, 2),
    *,
    third: Fraction = Fraction(1, 3),
    ansatz: AnsatzSpec = RATIO_ANSATZ,
) -> CertificateReport:
    """Forward checks of both families for f = u^k, k in ``fs``, and uniqueness of a/b."""
    rep = CertificateReport(
        "prim0",
        evidence_kind="both",
        parameters={"f": [f"u^{k}" for k in fs], "third": str(third), "ratio_ansatz": ansatz.to_json()},
    )
    with timed(rep):
        for k in fs:
            f = u_A**k
            for name, eta in (("f du", family_du(f)), ("second family", family_second(f, third))):
                bad = invariance_defects(eta)
                rep.check(f"{name} with f = u^{k}: eta(X0) = 0, i_X0 d eta = 0, eta ^ d eta = 0", not bad, ", ".join(bad))
                if not bad:
                    rep.witnesses.append(encode("integrable-form", "X0", eta))
        ok, detail = _ratio_form_check()
        rep.check("eta = rho du + (dy - y'dx): eta ^ d eta vanishes iff -X0(rho) + (6y^2/y') rho - 1/(2y') = 0", ok, detail)
        sol = solve_linear(ratio_operator, ansatz.atoms(), RATIO_RHS, ansatz=ansatz)
        unique = sol.status == "affine" and not sol.kernel and sol.particular == RATIO_SOLUTION
        detail = f"status {sol.status}, kernel dim {len(sol.kernel)}"
        if sol.status == "affine":
            detail += f", particular {sol.particular.to_text()}"
        rep.check("ratio equation has the unique solution a/b = -(x y' + 2y)/(6u) in the ansatz", unique, detail)
        # with b = -f/y' the form is f((x+2y/y')/(6u) du - (dy - y'dx)/y')
        ref = du.scale(w1 / (6 * u_A)) - contact.scale(yp.inverse())
        prop = ref.wedge(family_second(RatExpr.one(), Fraction(1, 3)))
        rep.check("second family is proportional to (x+2y/y')/(6u) du - (dy - y'dx)/y'", prop.is_zero)
        # f must be a first integral: i_X0 d(f ref) = (X0 f) * (...) and vanishes for f = u only
        rep.check("i_X0 d(f * ref) = 0 for f = u", (ref.scale(u_A)).d().interior(X0).is_zero)
        rep.check("i_X0 d(f * ref) != 0 for f = x (not a first integral)", not (ref.scale(x)).d().interior(X0).is_zero)
        rep.finish("verified" if rep.all_passed else "refuted")
    return rep


__all__ = ["verify_prim0", "family_du", "family_second", "invariance_defects", "du", "contact"]
