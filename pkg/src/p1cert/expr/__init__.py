"""Exact expression kernel: Laurent polynomials, rational functions, parser."""

from __future__ import annotations

from .parsing import ParseError, parse_expr, parse_ratexpr
from .poly import VARS, LaurentPoly, Q
from .ratexpr import Chart, ChartError, RatExpr, const, partial_derivative, to_chart, var


def canonicalize(e: RatExpr) -> RatExpr:
    """Return the canonical representative (RatExpr values are always canonical)."""
    return RatExpr(e.num, e.den)


__all__ = [
    "VARS",
    "LaurentPoly",
    "Q",
    "Chart",
    "ChartError",
    "RatExpr",
    "ParseError",
    "parse_expr",
    "parse_ratexpr",
    "partial_derivative",
    "to_chart",
    "canonicalize",
    "var",
    "const",
]
