"""Canonical text output in the expression grammar.

The output of every formatter parses back to an identical object.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from gmpy2 import mpq

from .poly import VARS, LaurentPoly

if TYPE_CHECKING:  # pragma: no cover
    from .ratexpr import RatExpr


def format_rational(c: mpq) -> str:
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_monomial(m: tuple[int, ...]) -> str:
    parts = []
    for name, e in zip(VARS, m):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: LaurentPoly) -> str:
    if p.is_zero:
        return "0"
    pieces: list[str] = []
    for idx, (m, c) in enumerate(p.sorted_terms()):
        mono = format_monomial(m)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_rational(a)}*{mono}"
        if idx == 0:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" - {body}" if neg else f" + {body}")
    return "".join(pieces)


def format_ratexpr(e: "RatExpr") -> str:
    num = format_poly(e.num)
    if e.den == LaurentPoly.const(1):
        return num
    return f"({num})/({format_poly(e.den)})"


BASIS_NAMES = {
    "A": ("dx", "dy", "dyp", "dalpha"),
    "B": ("dx", "dy", "du", "dalpha"),
}


def format_kform(w) -> str:
    """Format a KForm as a sum of (coefficient)*basis products."""
    if w.degree == 0:
        return format_ratexpr(w.coefficient(()))
    if w.is_zero:
        return "0"
    names = BASIS_NAMES[w.chart.value]
    pieces = []
    for idx in sorted(w.terms):
        coef = w.terms[idx]
        basis = "/\\".join(names[i] for i in idx)
        pieces.append(f"({format_ratexpr(coef)})*{basis}")
    return " + ".join(pieces)
