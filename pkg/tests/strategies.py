"""Hypothesis strategies for exact expressions, forms and fields in chart A."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from p1cert.exterior import KForm, VectorField
from p1cert.expr.ratexpr import Chart, RatExpr

A = Chart.A
NAMES = ("x", "y", "yp", "alpha")
VARS = {n: RatExpr.var(n) for n in NAMES}

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, names=NAMES, max_terms: int = 3, max_deg: int = 2) -> RatExpr:
    out = RatExpr.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        term = RatExpr.const(draw(coeffs))
        for n in names:
            e = draw(st.integers(0, max_deg))
            if e:
                term = term * VARS[n] ** e
        out = out + term
    return out


@st.composite
def functions(draw, names=NAMES, rational: bool = True) -> RatExpr:
    """A polynomial, or a polynomial over a small denominator such as yp or 1 + y^2."""
    p = draw(polys(names))
    if not rational or not draw(st.booleans()):
        return p
    den = draw(st.sampled_from([VARS["yp"], 1 + VARS["y"] ** 2, VARS["yp"] ** 2 - 4 * VARS["y"] ** 3, VARS["x"] - 1]))
    return p / den


@st.composite
def forms(draw, degree: int | None = None, rational: bool = True) -> KForm:
    from itertools import combinations

    k = draw(st.integers(0, 3)) if degree is None else degree
    terms = {}
    for idx in combinations(range(4), k):
        if draw(st.booleans()):
            terms[idx] = draw(functions(rational=rational))
    if k == 0:
        return KForm.function(A, terms.get((), RatExpr.zero()))
    return KForm(A, k, terms)


@st.composite
def fields(draw, rational: bool = False) -> VectorField:
    return VectorField(A, {n: draw(functions(rational=rational)) for n in NAMES})


@st.composite
def substitutions(draw) -> dict[str, RatExpr]:
    """Polynomial images of the four coordinates."""
    return {n: draw(polys(max_terms=2, max_deg=1)) for n in NAMES}


@st.composite
def form_pairs(draw, max_total: int = 3, rational: bool = False) -> tuple[KForm, KForm]:
    """Two forms whose degrees add up to at most ``max_total``."""
    a = draw(st.integers(0, max_total))
    b = draw(st.integers(0, max_total - a))
    return draw(forms(a, rational)), draw(forms(b, rational))


def frac(a: Fraction) -> RatExpr:
    return RatExpr.const(a)
