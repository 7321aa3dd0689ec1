from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from p1cert.exterior import apply_field
from p1cert.grading import INHOMOGENEOUS, homogeneous_parts, monomial_weight, sigma_weight
from p1cert.objects import X0, Sigma, Xalpha, alpha, dx, dy, omega01, omega01_alpha, omega02, s_B, u_A, u_B, w1, w2, x, y, yp

monomials = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(-3, 4), st.integers(0, 3))


def _mono(e):
    a, b, c, d = e
    return x**a * y**b * yp**c * alpha**d


def test_generator_weights():
    assert [sigma_weight(v) for v in (x, y, yp, alpha, u_B, s_B)] == [1, -2, -3, -1, -6, -3]
    assert sigma_weight(u_A) == -6
    assert sigma_weight(x + y) is INHOMOGENEOUS


@settings(max_examples=100)
@given(monomials)
def test_sigma_acts_by_weight(e):
    m = _mono(e)
    w = sigma_weight(m)
    assert w == monomial_weight(e + (0, 0))
    assert apply_field(Sigma, m) == w * m


@settings(max_examples=100)
@given(monomials)
def test_x0_and_xalpha_lower_weight_by_one(e):
    m = _mono(e)
    w = sigma_weight(m)
    for X in (X0, Xalpha):
        img = apply_field(X, m)
        assert img.is_zero or sigma_weight(img) == w - 1


def test_forms_are_homogeneous():
    assert sigma_weight(dx) == 1 and sigma_weight(dy) == -2
    assert sigma_weight(omega01_alpha) == -6
    assert sigma_weight(omega01) is INHOMOGENEOUS
    assert sigma_weight(omega02) == 1
    assert sigma_weight(w1) == 1 and sigma_weight(w2) == 1


def test_homogeneous_parts_split():
    parts = homogeneous_parts(x + y + x * y)
    assert parts == {1: x, -2: y, -1: x * y}
