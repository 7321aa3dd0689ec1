from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p1cert.certificates.asl2 import RATIONAL_B
from p1cert.certificates.asl20 import HOMOGENEOUS_ANSATZ, RING_ANSATZ, riccati_step
from p1cert.exterior import apply_field
from p1cert.expr.ratexpr import Chart, RatExpr
from p1cert.objects import X0, X0_B, X1, Omega0_0, Xalpha, alpha, u_A, u_B, x, y, yp
from p1cert.solvers import AnsatzError, AnsatzSpec, poly_ansatz, solve_linear, solve_transport
from p1cert.solvers.asl2 import asl2_extend
from p1cert.solvers.darboux import coupled_cofactor_search, darboux_search, rational_first_integrals
from p1cert.solvers.gv import asl2_defects, gv_check
from p1cert.solvers.riccati import riccati_rational_solutions, riccati_residual

from oracle_cases import oracle_property

ONE = RatExpr.one()


def test_transport_matches_oracle():
    oracle_property(20)()


# ---------------------------------------------------------------- ansatz


@settings(max_examples=100)
@given(
    st.dictionaries(st.sampled_from(["x", "y", "yp"]), st.integers(0, 4), min_size=1),
    st.integers(-3, 0),
    st.one_of(st.none(), st.integers(0, 6)),
    st.one_of(st.none(), st.integers(-8, 3)),
)
def test_ansatz_json_round_trip(deg, lo, total, weight):
    spec = AnsatzSpec(deg=deg, laurent={"yp": lo}, total=total, weight=weight)
    back = AnsatzSpec.from_json(spec.to_json())
    assert back.to_json() == spec.to_json()
    assert [a.to_text() for a in back.atoms()] == [a.to_text() for a in spec.atoms()]


def test_ansatz_rejects_bad_bounds():
    with pytest.raises(AnsatzError):
        AnsatzSpec(deg={"u": 2})
    with pytest.raises(AnsatzError):
        AnsatzSpec(deg={"x": 2}, laurent={"x": -1})
    with pytest.raises(AnsatzError):
        AnsatzSpec.from_json({"deg": {"x": 1}, "colour": 3})


def test_ansatz_monotone():
    small = poly_ansatz(3)
    big = small.enlarge(total=4, deg={"x": 4, "y": 4, "yp": 4})
    assert set(a.to_text() for a in small.atoms()) <= set(a.to_text() for a in big.atoms())


# ---------------------------------------------------------------- linear and transport


def test_solve_linear_affine_and_empty():
    atoms = [ONE, x, x**2]
    res = solve_linear(lambda f: f.diff("x"), atoms, 2 * x + 1)
    assert res.status == "affine" and res.contains(x**2 + x + 5)
    assert len(res.kernel) == 1
    assert solve_linear(lambda f: f.diff("x"), atoms, x**3).is_empty


def test_solve_linear_cap_gives_undetermined():
    res = solve_linear(lambda f: f, [x**k for k in range(5)], ONE, cap=3)
    assert res.is_undetermined


def test_transport_power_formula_control():
    w1 = x + 2 * y / yp
    g = 3 * u_A / yp**2
    res = solve_transport(X0, g, AnsatzSpec(deg={"x": 1, "y": 1, "yp": 0}, laurent={"yp": -1}))
    assert res.status == "affine" and res.contains(w1)


def test_transport_x0_y_polynomial_empty():
    res = solve_transport(X0, y, poly_ansatz(8))
    assert res.is_empty
    assert len(poly_ansatz(8).atoms()) == 165


def test_transport_x0_y_over_yp_squared_rational_empty():
    target = y / (4 * y**3 + u_B)
    assert solve_transport(X0_B, target, RATIONAL_B).is_empty


def test_transport_kernel_of_x0_is_functions_of_u():
    res = solve_transport(X0_B, RatExpr.zero(), AnsatzSpec(deg={"x": 2, "y": 6, "u": 2}, chart=Chart.B, total=6))
    assert res.status == "affine"
    assert all(k.variables() <= {"u"} for k in res.kernel)


# ---------------------------------------------------------------- darboux


def test_darboux_x0_finds_u():
    res = darboux_search(X0, 3, 1)
    assert res.contains(u_A, 0)


def test_darboux_x1_empty():
    res = darboux_search(X1, 5, 1)
    assert res.status == "complete" and not res.pairs


def test_darboux_pairs_verify():
    for P, L in darboux_search(X0, 4, 1).pairs:
        assert apply_field(X0, P) == L * P


def test_first_integrals_x0():
    assert rational_first_integrals(X0, 3).contains(u_A)
    assert rational_first_integrals(X0, 6).contains(u_A**2)
    assert rational_first_integrals(X1, 3).is_empty


def test_darboux_rejects_rational_fields():
    from p1cert.exterior import VectorField

    with pytest.raises(ValueError):
        darboux_search(VectorField(Chart.A, {"x": ONE / yp}), 2, 1)


def test_coupled_search_control_and_exclusion():
    assert coupled_cofactor_search(X0, 12 * y, RatExpr.zero(), 3, -4).status == "found"
    res = coupled_cofactor_search(Xalpha, 12 * y, alpha**2 * x, 3, -4, include_alpha=True)
    assert res.status == "empty"


# ---------------------------------------------------------------- riccati


def test_riccati_candidate_equation_is_empty_and_conclusive():
    # 2c' - 7/(9u^3) = -2c^2
    res = riccati_rational_solutions(RatExpr.const(Fraction(7, 18)) / u_B**3, -ONE, 8)
    assert res.is_empty and res.conclusive


def test_riccati_derived_equation_has_two_solutions():
    # 2c' - c/u - 7/(9u^2) = 2c^2
    p, q, r = RatExpr.const(Fraction(7, 18)) / u_B**2, ONE, ONE / (2 * u_B)
    res = riccati_rational_solutions(p, q, 8, r)
    assert sorted(s.to_text() for s in res) == sorted([(-ONE / (3 * u_B)).to_text(), (RatExpr.const(Fraction(-7, 6)) / u_B).to_text()])
    assert all(riccati_residual(c, p, q, r).is_zero for c in res)


def test_riccati_pole_free_control_is_empty():
    # 2c' - 8u = -2c^2, i.e. c' = 4u - c^2: still no rational solution
    res = riccati_step(4 * u_B, -ONE)
    assert res.is_empty and res.conclusive


@settings(max_examples=100)
@given(st.integers(-4, 4).filter(bool), st.integers(-3, 3))
def test_riccati_recovers_planted_solutions(a, e):
    # c = a u^e solves c' = p - c^2 with p = c' + c^2
    c = RatExpr.const(a) * u_B**e
    p = c.diff("u", Chart.B) + c * c
    res = riccati_rational_solutions(p, -ONE, 8)
    assert c in res


def test_riccati_linear_case():
    # c' = 1/u + c/u: the family c = -1 + K u
    res = riccati_rational_solutions(ONE / u_B, None, 4, ONE / u_B)
    assert res.family
    assert all(riccati_residual(c, ONE / u_B, RatExpr.zero(), ONE / u_B).is_zero for c in res)
    assert riccati_residual(u_B * 5 - 1, ONE / u_B, RatExpr.zero(), ONE / u_B).is_zero


# ---------------------------------------------------------------- godbillon-vey


def test_asl2_extend_on_x0_finds_rational_witnesses():
    res = asl2_extend(Omega0_0, HOMOGENEOUS_ANSATZ)
    assert res.status == "found" and len(res.witnesses) == 2
    for M in res.witnesses:
        assert M.trace().is_zero
        assert not asl2_defects(Omega0_0, M)


def test_asl2_extend_ring_ansatz_empty():
    assert asl2_extend(Omega0_0, RING_ANSATZ).is_empty


def test_gv_check_order_zero():
    from p1cert.objects import omega01, omega02

    # order 0 imposes no structure equation
    omega = {(1, (0, 0)): omega01, (2, (0, 0)): omega02}
    assert gv_check(omega, 2, 0) == []
