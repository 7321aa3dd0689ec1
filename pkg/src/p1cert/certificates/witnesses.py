"""Witness strings that re-verify from their text alone.

A witness reads ``kind|context|payload`` where payload parts are separated by
`` ; ``.  Kinds:

    first-integral|X|H          X H = 0 and H non-constant
    darboux|X|P ; L             X P = L P
    transport|X|g ; R           X R = g
    riccati|p ; q ; r|c         c' = p + r c + q c^2 in the variable u
    integrable-form|X|eta       eta(X) = 0, i_X d eta = 0, eta ^ d eta = 0
    asl2|Omega0|m11 ; m12 ; m21 ; m22
                                trace zero, d Omega0 = Omega1 ^ Omega0, d Omega1 = Omega1 ^ Omega1

The field or Omega0 name may carry a chart suffix ``@B`` (default chart A).
"""

from __future__ import annotations

from ..exterior import FormMatrix, KForm, VectorField, apply_field
from ..expr.parsing import parse_expr, parse_ratexpr
from ..expr.ratexpr import Chart, RatExpr
from .. import objects

SEP = " ; "


def _field(name: str) -> VectorField:
    base, _, chart = name.partition("@")
    if base == "X0" and chart == "B":
        return objects.X0_B
    if base not in objects.FIELDS:
        raise KeyError(f"unknown field {base}")
    return objects.FIELDS[base]


def _omega0(name: str) -> FormMatrix:
    table = {"Omega0": objects.Omega0, "Omega0_0": objects.Omega0_0, "Omega0_alpha": objects.Omega0_alpha}
    return table[name]


def _text(v) -> str:
    return v.to_text()


def encode(kind: str, context: str, *payload) -> str:
    parts = [p if isinstance(p, str) else _text(p) for p in payload]
    return f"{kind}|{context}|{SEP.join(parts)}"


def encode_asl2(context: str, M: FormMatrix) -> str:
    return encode("asl2", context, *(M[i, j] for i in range(2) for j in range(2)))


def decode(w: str) -> tuple[str, str, list[str]]:
    kind, context, payload = w.split("|", 2)
    return kind, context, payload.split(SEP)


def _form(text: str, chart: Chart) -> KForm:
    v = parse_expr(text, chart)
    if isinstance(v, RatExpr):
        if v.is_zero:
            return KForm(chart, 1)
        raise ValueError("expected a 1-form")
    return v


def reverify(w: str) -> bool:
    """Re-check a serialized witness exactly."""
    from ..solvers.gv import asl2_defects
    from ..solvers.riccati import riccati_residual

    kind, context, parts = decode(w)
    if kind == "riccati":
        p, q, r = (parse_ratexpr(t, Chart.B) for t in context.split(SEP))
        c = parse_ratexpr(parts[0], Chart.B)
        return riccati_residual(c, p, q, r).is_zero
    if kind == "asl2":
        O0 = _omega0(context)
        ch = O0.chart
        f = [_form(t, ch) for t in parts]
        M = FormMatrix([[f[0], f[1]], [f[2], f[3]]], ch)
        return M.trace().is_zero and not asl2_defects(O0, M)
    X = _field(context)
    ch = X.chart
    if kind == "first-integral":
        H = parse_ratexpr(parts[0], ch)
        return apply_field(X, H).is_zero and not _constant(H)
    if kind == "darboux":
        P, L = (parse_ratexpr(t, ch) for t in parts)
        return apply_field(X, P) == L * P and not _constant(P)
    if kind == "transport":
        g, R = (parse_ratexpr(t, ch) for t in parts)
        return apply_field(X, R) == g
    if kind == "integrable-form":
        eta = _form(parts[0], ch)
        deta = eta.d()
        return eta(X).is_zero and deta.interior(X).is_zero and eta.wedge(deta).is_zero
    raise ValueError(f"unknown witness kind {kind}")


def _constant(e: RatExpr) -> bool:
    return e.is_polynomial() and all(not any(m) for m, _ in e.num.items())


__all__ = ["encode", "encode_asl2", "decode", "reverify", "SEP"]
