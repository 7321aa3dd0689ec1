"""Independent dense oracle for transport equations, built on sympy expressions.

Nothing here touches the package's own polynomial or RREF code: the ansatz
monomials are re-enumerated from the raw bounds, X R is differentiated with
sympy, and the matching system is reduced with ``sympy.Matrix.rref``.
"""

from __future__ import annotations

from itertools import product

import sympy as sp

SYMS = {name: sp.Symbol(name) for name in ("x", "y", "yp", "alpha", "u")}


def sympy_field(components: dict[str, str]) -> dict[sp.Symbol, sp.Expr]:
    """Parse {variable: expression text} with ^ as power into sympy."""
    return {SYMS[k]: sp.sympify(v.replace("^", "**"), locals=SYMS) for k, v in components.items()}


def oracle_monomials(deg: dict[str, int], laurent: dict[str, int], total: int | None, weight: int | None) -> list[sp.Expr]:
    weights = {"x": 1, "y": -2, "yp": -3, "alpha": -1, "u": -6}
    names = sorted(deg)
    out = []
    for exps in product(*[range(laurent.get(n, 0), deg[n] + 1) for n in names]):
        if total is not None and sum(e for e in exps if e > 0) > total:
            continue
        if weight is not None and sum(weights[n] * e for n, e in zip(names, exps)) != weight:
            continue
        term = sp.Integer(1)
        for n, e in zip(names, exps):
            term *= SYMS[n] ** e
        out.append(term)
    return out


def oracle_transport(field: dict[sp.Symbol, sp.Expr], g: sp.Expr, monomials: list[sp.Expr]):
    """Return (particular, kernel) as sympy expressions, or None when inconsistent."""
    cs = sp.symbols(f"c0:{len(monomials)}")
    R = sum((c * m for c, m in zip(cs, monomials)), sp.Integer(0))
    XR = sum((coef * sp.diff(R, v) for v, coef in field.items()), sp.Integer(0))
    expr = sp.together(sp.expand(XR - g))
    num, _ = sp.fraction(expr)
    gens = [s for s in SYMS.values() if num.has(s)]
    poly = sp.Poly(sp.expand(num), *gens) if gens else None
    eqs = poly.coeffs() if poly is not None else ([num] if num != 0 else [])
    if not eqs:
        return R.subs({c: 0 for c in cs}), list(monomials)
    A, b = sp.linear_eq_to_matrix(eqs, cs)
    aug = A.row_join(b)
    rref, pivots = aug.rref()
    n = len(cs)
    if n in pivots:
        return None
    part = [sp.Integer(0)] * n
    for i, p in enumerate(pivots):
        part[p] = rref[i, n]
    kernel = []
    for f in [j for j in range(n) if j not in pivots]:
        v = [sp.Integer(0)] * n
        v[f] = sp.Integer(1)
        for i, p in enumerate(pivots):
            v[p] = -rref[i, f]
        kernel.append(sum((a * m for a, m in zip(v, monomials)), sp.Integer(0)))
    particular = sum((a * m for a, m in zip(part, monomials)), sp.Integer(0))
    return particular, kernel


def _coeff_vectors(exprs: list[sp.Expr]) -> tuple[list[dict], list]:
    """Coefficient maps over Laurent monomials of x, y, yp, alpha, u."""
    out = []
    keys = set()
    for e in exprs:
        e = sp.expand(e)
        d = {}
        for term in sp.Add.make_args(e):
            if term == 0:
                continue
            coeff, mono = term.as_coeff_Mul()
            d[mono] = d.get(mono, 0) + coeff
        d = {k: v for k, v in d.items() if v != 0}
        keys |= set(d)
        out.append(d)
    return out, sorted(keys, key=sp.default_sort_key)


def same_affine_space(part_a: sp.Expr, kern_a: list[sp.Expr], part_b: sp.Expr, kern_b: list[sp.Expr]) -> bool:
    """Are part_a + span(kern_a) and part_b + span(kern_b) equal?  (compared via RREF)."""
    vecs, keys = _coeff_vectors(list(kern_a) + list(kern_b) + [part_a - part_b])
    ka, kb = len(kern_a), len(kern_b)

    def mat(rows):
        if not rows:
            return sp.zeros(0, len(keys))
        return sp.Matrix([[r.get(k, 0) for k in keys] for r in rows])

    A = mat(vecs[:ka])
    Bm = mat(vecs[ka : ka + kb])
    ra = A.rref()[0] if ka else A
    rb = Bm.rref()[0] if kb else Bm
    strip = lambda M: [list(M.row(i)) for i in range(M.rows) if any(v != 0 for v in M.row(i))]
    if strip(ra) != strip(rb):
        return False
    diff = mat([vecs[-1]])
    if all(v == 0 for v in diff):
        return True
    if not ka:
        return False
    return A.rank() == A.col_join(diff).rank()


__all__ = ["SYMS", "sympy_field", "oracle_monomials", "oracle_transport", "same_affine_space"]
