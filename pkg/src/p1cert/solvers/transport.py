"""Transport equations X R = g solved by coefficient matching in an ansatz."""

from __future__ import annotations

from ..exterior import VectorField, apply_field, chart_convert
from ..expr.ratexpr import RatExpr, to_chart
from .ansatz import AnsatzSpec
from .linear import DEFAULT_CAP, SolutionSet, solve_linear


def solve_transport(X: VectorField, g: RatExpr, ansatz: AnsatzSpec, *, cap: int = DEFAULT_CAP) -> SolutionSet:
    """The affine set {R in span(ansatz) : X R = g}, complete within the ansatz."""
    if ansatz.kind != "function":
        raise ValueError("solve_transport expects a function ansatz")
    if not isinstance(g, RatExpr):
        g = RatExpr.const(g)
    chart = ansatz.chart
    if X.chart is not chart:
        X = chart_convert(X, chart)
    g = to_chart(g, chart)
    n = len(ansatz.monomials(ansatz.weight)) * (ansatz.den_power + 1)
    if n > cap:
        return SolutionSet("undetermined", ansatz=ansatz, reason=f"ansatz size {n} exceeds cap {cap}")
    atoms = ansatz.atoms()
    # Monomials in the chart coordinates (with s in {0, 1}) are independent;
    # rational atoms m / D^j may not be and are reduced first.
    return solve_linear(lambda R: apply_field(X, R), atoms, g, ansatz=ansatz, independent=ansatz.independent, cap=cap)


def transport_operator(X: VectorField):
    return lambda R: apply_field(X, R)


__all__ = ["solve_transport", "transport_operator"]
