"""Exterior-calculus identities shared by the unit properties and the acceptance run."""

from __future__ import annotations

from hypothesis import given, settings

from p1cert.exterior import exterior_derivative, lie_bracket, lie_derivative, lie_derivative_direct, pullback

from strategies import fields, form_pairs, forms, substitutions

N = 100


def d_squared(w) -> bool:
    return exterior_derivative(exterior_derivative(w)).is_zero


def cartan(X, w) -> bool:
    # formula i_X d + d i_X against the coordinate expression of L_X
    return lie_derivative(X, w) == lie_derivative_direct(X, w)


def pullback_compatible(phi, pair) -> bool:
    a, b = pair
    d_ok = pullback(phi, a.d()) == pullback(phi, a).d()
    w_ok = pullback(phi, a.wedge(b)) == pullback(phi, a).wedge(pullback(phi, b))
    return d_ok and w_ok


def jacobi(X, Y, Z) -> bool:
    total = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))
    return total == type(X)(X.chart, {})


def property_tests(n: int = N):
    """Hypothesis-wrapped versions with ``n`` examples each."""
    s = settings(max_examples=n)
    return {
        "d o d = 0": s(given(forms())(lambda w: _assert(d_squared(w)))),
        "Cartan formula": s(given(fields(), forms())(lambda X, w: _assert(cartan(X, w)))),
        "pullback commutes with d and wedge": s(
            given(substitutions(), form_pairs())(lambda p, ab: _assert(pullback_compatible(p, ab)))
        ),
        "Jacobi identity": s(given(fields(), fields(), fields())(lambda X, Y, Z: _assert(jacobi(X, Y, Z)))),
    }


def _assert(ok: bool) -> None:
    assert ok
