from __future__ import annotations

import pytest

from p1cert.exterior import (
    FormMatrix,
    KForm,
    VectorField,
    apply_field,
    coframe_decompose,
    column,
    differential,
    interior_product,
    lie_bracket,
)
from p1cert.expr.ratexpr import Chart
from p1cert.objects import EPSILON, X0, X1, Sigma, dx, dy, dyp, gamma, omega01, omega02, vol, x, y, yp

from properties import property_tests

PROPS = property_tests()


@pytest.mark.parametrize("name", list(PROPS))
def test_exterior_identity(name):
    PROPS[name]()


def test_wedge_is_graded_commutative():
    a, b = dx.scale(y), dy.scale(x + yp)
    assert a.wedge(b) == -b.wedge(a)
    assert a.wedge(a).is_zero


def test_d_of_function_and_volume():
    assert differential(x * y, Chart.A) == dx.scale(y) + dy.scale(x)
    assert vol.d().is_zero
    assert vol == dx.wedge(dy).wedge(dyp)


def test_painleve_coframe_annihilates_x1():
    assert omega01(X1).is_zero
    assert omega02(X1).is_zero
    assert interior_product(X1, gamma).is_zero


def test_gamma_is_closed_and_matches_coframe():
    assert gamma.d().is_zero
    assert omega01.wedge(omega02) == gamma.scale(EPSILON)


def test_interior_product_is_antiderivation():
    a, b = dx.scale(yp), dy.scale(x)
    lhs = interior_product(X1, a.wedge(b))
    rhs = interior_product(X1, a).wedge(b) - a.wedge(interior_product(X1, b))
    assert lhs == rhs


def test_bracket_with_sigma_lowers_weight():
    # X0 has weight -1 under Sigma: [Sigma, X0] = -X0
    assert lie_bracket(Sigma, X0) == X0.scale(-1)


def test_coframe_decompose_recovers_coefficients():
    frame = [dx, omega01, omega02]
    w = dx.scale(x) + omega01.scale(y) - omega02.scale(yp**2)
    assert coframe_decompose(w, frame) == [x, y, -(yp**2)]


def test_form_matrix_structure():
    M = FormMatrix([[dx, dy], [dy.scale(x), dx.scale(-1)]])
    assert M.trace().is_zero
    O = column([omega01, omega02])
    prod = M.wedge(O)
    assert prod[0, 0] == dx.wedge(omega01) + dy.wedge(omega02)
    assert (M - M).is_zero


def test_apply_field_matches_components():
    assert apply_field(X1, yp) == 6 * y**2 + x
    assert X1(y) == yp


def test_chart_mismatch_rejected():
    B = VectorField(Chart.B, {"x": 1})
    with pytest.raises(ValueError):
        lie_bracket(X1, B)
    with pytest.raises(ValueError):
        KForm.basis(Chart.A, 0).wedge(KForm.basis(Chart.B, 0))
