"""Randomized transport instances compared against the dense sympy oracle."""

from __future__ import annotations

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from p1cert import objects
from p1cert.exterior import VectorField, apply_field
from p1cert.expr.ratexpr import Chart, RatExpr
from p1cert.solvers import AnsatzSpec, solve_transport
from p1cert.solvers.oracle import SYMS, oracle_monomials, oracle_transport, same_affine_space

from strategies import coeffs, polys

MAX_ATOMS = 60


def to_sympy(e: RatExpr) -> sp.Expr:
    return sp.sympify(e.to_text().replace("^", "**"), locals=SYMS)


@st.composite
def instances(draw):
    kind = draw(st.sampled_from(["X0", "X1", "Xalpha", "random"]))
    if kind == "random":
        X = VectorField(Chart.A, {n: draw(polys(("x", "y", "yp"), max_terms=2)) for n in ("x", "y", "yp")})
    else:
        X = objects.FIELDS[kind]
    names = ["x", "y", "yp"] + (["alpha"] if kind == "Xalpha" else [])
    deg = {n: draw(st.integers(0, 3)) for n in names}
    laurent = {"yp": draw(st.integers(-2, 0))}
    total = draw(st.one_of(st.none(), st.integers(1, 5)))
    weight = draw(st.one_of(st.none(), st.integers(-6, 2)))
    spec = AnsatzSpec(deg=deg, laurent=laurent, total=total, weight=weight)
    n = len(spec.atoms())
    if n == 0 or n > MAX_ATOMS:
        spec = AnsatzSpec(deg={"x": 2, "y": 2, "yp": 1}, laurent={"yp": -1})
    atoms = spec.atoms()
    if draw(st.booleans()):
        # consistent right-hand side: image of an ansatz element
        R = RatExpr.zero()
        for a in atoms[: draw(st.integers(1, len(atoms)))]:
            R = R + RatExpr.const(draw(coeffs)) * a
        g = apply_field(X, R)
    else:
        g = draw(polys(names, max_terms=2))
    return X, spec, g


def agrees(X: VectorField, spec: AnsatzSpec, g: RatExpr) -> bool:
    ours = solve_transport(X, g, spec)
    field = {SYMS[name]: to_sympy(c) for name, c in _named(X).items()}
    mons = oracle_monomials(dict(spec.deg), dict(spec.laurent), spec.total, spec.weight)
    ref = oracle_transport(field, to_sympy(g), mons)
    if ref is None:
        return ours.status == "empty"
    if ours.status != "affine":
        return False
    return same_affine_space(ref[0], ref[1], to_sympy(ours.particular), [to_sympy(k) for k in ours.kernel])


def _named(X: VectorField) -> dict[str, RatExpr]:
    names = ("x", "y", "yp", "alpha")
    return {names[k]: c for k, c in X.components.items()}


def oracle_property(n: int = 20):
    @settings(max_examples=n)
    @given(instances())
    def run(inst):
        X, spec, g = inst
        assert len(spec.atoms()) <= MAX_ATOMS
        assert agrees(X, spec, g)

    return run
