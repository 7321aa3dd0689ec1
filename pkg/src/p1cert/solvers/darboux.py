"""Darboux polynomials X P = L P and rational first integrals.

The cofactor L has unknown coefficients l_j, so X P - L P = 0 is bilinear.
It is handled by Gaussian elimination over the fraction field Q(l) with
case splits: a non-constant pivot e either is invertible (added to the set
of quantities assumed nonzero) or vanishes (one of its irreducible factors is
zero; linear factors are substituted, anything else makes the branch
undetermined).  Each leaf has all cofactors fixed and a kernel over Q.

Before the split the cofactor support is pruned by a grading argument: if w
is an integer weight on the coordinates and the top w-weight of X raises
weights by at most t(w), then every monomial m of L satisfies w(m) <= t(w),
since the top parts of L and P multiply to a nonzero top part of L P.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any

from gmpy2 import mpq
from sympy.polys.domains import QQ
from sympy.polys.fields import field as frac_field
from sympy.polys.matrices import DomainMatrix

from ..exterior import COORD_NAMES, VectorField, apply_field
from ..expr.poly import VARS, LaurentPoly, grlex_key
from ..expr.ratexpr import COORDS, RatExpr

BRANCH_CAP = 10_000
WEIGHT_RANGE = 3


class DarboxInputError(ValueError):
    """Field is not polynomial."""


def _field_coords(X: VectorField, include_alpha: bool | None = None) -> list[int]:
    """Variable indices the search runs over."""
    coords = list(COORDS[X.chart][:3])
    uses_alpha = any(c.uses("alpha") for c in X.components.values()) or 3 in X.components
    if include_alpha or (include_alpha is None and uses_alpha):
        coords.append(VARS.index("alpha"))
    return coords


def _check_polynomial(X: VectorField) -> None:
    for c in X.components.values():
        if not c.is_polynomial() or any(e < 0 for m, _ in c.num.items() for e in m):
            raise DarboxInputError("darboux_search needs a polynomial vector field")
        if c.uses("s"):
            raise DarboxInputError("darboux_search does not handle s")


def _monomials(coords: list[int], deg: int) -> list[tuple[int, ...]]:
    out = []
    for exps in product(range(deg + 1), repeat=len(coords)):
        if sum(exps) > deg:
            continue
        m = [0] * len(VARS)
        for i, e in zip(coords, exps):
            m[i] = e
        out.append(tuple(m))
    out.sort(key=grlex_key, reverse=True)
    return out


def admissible_cofactor_monomials(X: VectorField, degL: int, coords: list[int] | None = None, wrange: int = WEIGHT_RANGE) -> list[tuple[int, ...]]:
    """Cofactor monomials surviving the grading argument for every weight in a box."""
    coords = coords or _field_coords(X)
    shifts = []
    chart_coords = COORDS[X.chart]
    for k, c in X.components.items():
        v = chart_coords[k]
        for m, _ in c.num.items():
            shifts.append((m, v))
    cands = _monomials(coords, degL)
    keep = []
    weights = list(product(range(-wrange, wrange + 1), repeat=len(coords)))
    for m in cands:
        ok = True
        for wv in weights:
            w = [0] * len(VARS)
            for i, val in zip(coords, wv):
                w[i] = val
            top = max(sum(a * b for a, b in zip(w, t)) - w[v] for t, v in shifts) if shifts else None
            wm = sum(a * b for a, b in zip(w, m))
            if top is None or wm > top:
                ok = False
                break
        if ok:
            keep.append(m)
    return keep


@dataclass
class DarbouxCell:
    """All P (within the degree bound) with X P = L P for one cofactor L."""

    cofactor: RatExpr
    kernel: list[RatExpr]

    @property
    def dim(self) -> int:
        return len(self.kernel)

    def nonconstant(self) -> list[RatExpr]:
        return [p for p in self.kernel if not p.is_constant()]

    def contains(self, P: RatExpr) -> bool:
        from .linear import flatten, solve_coordinates

        if P.is_zero:
            return True
        if not self.kernel:
            return False
        return solve_coordinates([flatten(k) for k in self.kernel], flatten(P)).consistent

    def to_json(self) -> dict[str, Any]:
        return {"cofactor": self.cofactor.to_text(), "kernel": [p.to_text() for p in self.kernel]}


@dataclass
class DarbouxResult:
    status: str  # "complete" or "undetermined"
    cells: list[DarbouxCell] = field(default_factory=list)
    cofactor_support: list[str] = field(default_factory=list)
    branches: int = 0
    reason: str = ""
    degP: int = 0
    degL: int = 0

    @property
    def pairs(self) -> list[tuple[RatExpr, RatExpr]]:
        """Non-constant Darboux polynomials with their cofactors (kernel bases)."""
        out = []
        for c in self.cells:
            for p in c.nonconstant():
                out.append((p, c.cofactor))
        return out

    def __len__(self) -> int:
        return len(self.pairs)

    def __bool__(self) -> bool:
        return bool(self.pairs)

    def contains(self, P: RatExpr, L: RatExpr | int) -> bool:
        L = L if isinstance(L, RatExpr) else RatExpr.const(L)
        for c in self.cells:
            # projective pairs: P up to scaling, cofactor exact
            if c.cofactor == L and c.contains(P):
                return True
        return False

    def cell(self, L: RatExpr | int) -> DarbouxCell | None:
        L = L if isinstance(L, RatExpr) else RatExpr.const(L)
        for c in self.cells:
            if c.cofactor == L:
                return c
        return None


class _Undetermined(Exception):
    pass


def _is_const(e) -> bool:
    return e.numer.is_ground and e.denom.is_ground


def _subst_frac(F, e, var, value):
    n = e.numer.compose(var, value)
    d = e.denom.compose(var, value)
    return F.new(n, d) if hasattr(F, "new") else F(n) / F(d)


def darboux_search(
    X: VectorField,
    degP: int,
    degL: int | None = None,
    *,
    include_alpha: bool | None = None,
    branch_cap: int = BRANCH_CAP,
    prune: bool = True,
) -> DarbouxResult:
    """All (P, L) with X P = L P, P of total degree <= degP, L of degree <= degL."""
    _check_polynomial(X)
    coords = _field_coords(X, include_alpha)
    if degL is None:
        top = max((c.num.total_degree() for c in X.components.values()), default=0)
        degL = max(top - 1, 0)
    lmons = admissible_cofactor_monomials(X, degL, coords) if prune else _monomials(coords, degL)
    pmons = _monomials(coords, degP)
    nl = len(lmons)
    lnames = ",".join(f"l{j}" for j in range(max(nl, 1)))
    F, *lgens = frac_field(lnames, QQ)
    ring = F.ring
    # columns: P monomials; rows: monomials of X m - L m
    rows: dict[tuple, dict[int, Any]] = {}
    for k, m in enumerate(pmons):
        img = apply_field(X, RatExpr(LaurentPoly({m: 1}, check=False), canonical=True))
        for mm, c in img.num.items():
            rows.setdefault(mm, {})
            rows[mm][k] = rows[mm].get(k, F(0)) + F(QQ(c))
        for j, lm in enumerate(lmons):
            mm = tuple(a + b for a, b in zip(m, lm))
            rows.setdefault(mm, {})
            rows[mm][k] = rows[mm].get(k, F(0)) - lgens[j]
    matrix = []
    for key in sorted(rows, key=grlex_key, reverse=True):
        r = {k: v for k, v in rows[key].items() if v != 0}
        if r:
            matrix.append(r)
    result = DarbouxResult("complete", cofactor_support=[RatExpr(LaurentPoly({m: 1}), canonical=True).to_text() for m in lmons], degP=degP, degL=degL)
    leaves: list[tuple[dict, list[dict], list]] = []
    counter = [0]
    try:
        _eliminate(F, ring, matrix, [], {}, leaves, counter, branch_cap, len(pmons))
    except _Undetermined as exc:
        result.status = "undetermined"
        result.reason = str(exc)
    result.branches = counter[0]
    cells: dict[RatExpr, list] = {}
    for assignment, rref_rows, pivots in leaves:
        L = RatExpr.zero()
        free_params = False
        for j, lm in enumerate(lmons):
            val = assignment.get(j)
            if val is None or not val.is_ground:
                free_params = True
                continue
            L = L + RatExpr(LaurentPoly({lm: 1}), canonical=True).scale(mpq(val.LC) if val else 0)
        kernel = _leaf_kernel(rref_rows, pivots, len(pmons), pmons)
        if not kernel:
            continue
        if free_params:
            result.status = "undetermined"
            result.reason = "cofactor family with free parameters and nontrivial kernel"
            continue
        cells.setdefault(L, []).extend(kernel)
    out = []
    for L in sorted(cells, key=lambda e: e.to_text()):
        basis = _canonical_basis(cells[L], pmons)
        cell = DarbouxCell(L, basis)
        for p in basis:
            if apply_field(X, p) != L * p:
                raise AssertionError("Darboux pair failed re-verification")
        if cell.nonconstant():
            out.append(cell)
    result.cells = out
    return result


def _eliminate(F, ring, matrix, nonzero, assignment, leaves, counter, cap, ncols):
    """Recursive parametric RREF.  assignment maps l-index -> mpq."""
    counter[0] += 1
    if counter[0] > cap:
        raise _Undetermined(f"branch cap {cap} exceeded")
    rows = [dict(r) for r in matrix]
    pivots: list[tuple[int, int]] = []  # (row, col)
    pivot_rows: set[int] = set()
    nonzero = list(nonzero)
    while True:
        best = None
        for i, r in enumerate(rows):
            if i in pivot_rows:
                continue
            for c, v in r.items():
                if _is_const(v):
                    key = (0, c, i)
                else:
                    key = (1, _tdeg(v.numer), c, i)
                if best is None or key < best[0]:
                    best = (key, i, c)
        if best is None:
            break
        (kind, *_), i, c = best
        e = rows[i][c]
        if kind == 1:
            # branch: e == 0
            _branch_zero(F, ring, rows, nonzero, assignment, leaves, counter, cap, ncols, e.numer)
            nonzero.append(e.numer)
        inv = 1 / e
        rows[i] = {k: v * inv for k, v in rows[i].items()}
        for t, r in enumerate(rows):
            if t == i or c not in r:
                continue
            f = r[c]
            new = dict(r)
            for k, v in rows[i].items():
                val = new.get(k, F(0)) - f * v
                if val == 0:
                    new.pop(k, None)
                else:
                    new[k] = val
            rows[t] = new
        pivots.append((i, c))
        pivot_rows.add(i)
    leaves.append((dict(assignment), rows, pivots))


def _branch_zero(F, ring, rows, nonzero, assignment, leaves, counter, cap, ncols, numer):
    _, factors = numer.factor_list()
    for f, _mult in factors:
        if f.is_ground:
            continue
        # solve f = a*l_j + rest for some l_j with constant a, rest free of l_j
        j = None
        for idx, g in enumerate(ring.gens):
            if f.degree(g) == 1 and f.coeff_wrt(g, 1).is_ground:
                j = idx
                break
        if j is None:
            if len(ring.gens) == 1 and _algebraic_branch_dead(ring, rows, nonzero, ncols, f):
                continue
            raise _Undetermined(f"nonlinear pivot factor {f}")
        g = ring.gens[j]
        a = f.coeff_wrt(g, 1)
        rest = f - a * g
        value = rest * (QQ(-1) / a.LC)
        new_nonzero = []
        dead = False
        for p in nonzero:
            q = p.compose(g, value)
            if q == 0:
                dead = True
                break
            new_nonzero.append(q)
        if dead:
            continue
        new_rows = []
        for r in rows:
            nr = {}
            for k, v in r.items():
                w = _subst_frac(F, v, g, value)
                if w != 0:
                    nr[k] = w
            new_rows.append(nr)
        new_assign = _apply_assignment(assignment, g, j, value)
        _eliminate(F, ring, [r for r in new_rows if r], new_nonzero, new_assign, leaves, counter, cap, ncols)


def _algebraic_branch_dead(ring, rows, nonzero, ncols, f) -> bool:
    """Whether the branch f(l) = 0 (f irreducible of degree > 1) has a trivial kernel.

    The rows are evaluated at one root theta of f in Q(theta).  The roots of
    an irreducible f are Galois conjugate, so the rank is the same for all.
    """
    from sympy import CRootOf, Poly, Symbol

    t = Symbol("t")
    if any(p.rem(f) == 0 for p in nonzero):
        return True  # covered by the branch where that pivot is nonzero
    coeffs = [QQ(c) for c in f.to_dense()]
    theta = CRootOf(Poly(coeffs, t, domain=QQ), 0)
    K = QQ.algebraic_field(theta)
    th = K.convert(theta)

    def ev(v):
        num = sum((K.convert(QQ(c)) * th ** m[0] for m, c in v.numer.terms()), K.zero)
        den = sum((K.convert(QQ(c)) * th ** m[0] for m, c in v.denom.terms()), K.zero)
        return num / den

    dense = [[K.zero] * ncols for _ in rows]
    for i, r in enumerate(rows):
        for k, v in r.items():
            dense[i][k] = ev(v)
    if not dense:
        return ncols == 0
    return DomainMatrix(dense, (len(dense), ncols), K).rank() == ncols


def _apply_assignment(assignment, g, j, value):
    """Record l_j = value, updating earlier values that mention l_j."""
    out = {k: v.compose(g, value) for k, v in assignment.items()}
    out[j] = value
    return out


def _tdeg(p) -> int:
    return max((sum(m) for m in p.monoms()), default=0)


def _leaf_kernel(rows, pivots, ncols, pmons) -> list[RatExpr]:
    pivot_cols = {c: i for i, c in pivots}
    kernel = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        coeffs = {f: mpq(1)}
        ok = True
        for c, i in pivot_cols.items():
            v = rows[i].get(f)
            if v is None:
                continue
            if not _is_const(v):
                ok = False
                break
            coeffs[c] = -mpq(v.numer.LC) / mpq(v.denom.LC) if v.numer else mpq(0)
        if not ok:
            continue
        P = LaurentPoly({pmons[k]: c for k, c in coeffs.items() if c})
        kernel.append(RatExpr(P, canonical=True))
    return kernel


def _canonical_basis(polys: list[RatExpr], pmons) -> list[RatExpr]:
    """Reduced row-echelon basis of span(polys) in decreasing grlex order."""
    index = {m: k for k, m in enumerate(pmons)}
    sdm = {}
    for i, p in enumerate(polys):
        sdm[i] = {index[m]: QQ(c) for m, c in p.num.items()}
    M = DomainMatrix(sdm, (len(polys), len(pmons)), QQ)
    R, pivots = M.rref()
    R = R.to_sdm()
    out = []
    for i in range(len(pivots)):
        row = R.get(i, {})
        out.append(RatExpr(LaurentPoly({pmons[k]: mpq(c) for k, c in row.items()}), canonical=True))
    return out


# ---------------------------------------------------------------------------
# rational first integrals


@dataclass
class FirstIntegralSet:
    """Rational first integrals H = P/Q assembled from Darboux cells sharing a cofactor."""

    status: str  # "empty", "found" or "undetermined"
    cells: list[DarbouxCell] = field(default_factory=list)
    witnesses: list[RatExpr] = field(default_factory=list)
    deg: int = 0
    reason: str = ""

    @property
    def is_empty(self) -> bool:
        return self.status == "empty"

    def contains(self, H: RatExpr) -> bool:
        """H = P/Q with P and Q in one cell (degree bound of the search)."""
        if H.is_constant():
            return False
        P, Q = RatExpr(H.num, canonical=True), RatExpr(H.den, canonical=True)
        if any(e < 0 for m, _ in H.num.items() for e in m):
            return False
        for cell in self.cells:
            if cell.dim >= 2 and cell.contains(P) and cell.contains(Q):
                return True
        return False


def rational_first_integrals(X: VectorField, deg: int, *, degL: int | None = None, include_alpha: bool | None = None, branch_cap: int = BRANCH_CAP) -> FirstIntegralSet:
    """Non-constant H = P/Q with deg P, deg Q <= deg and X H = 0."""
    res = darboux_search(X, deg, degL, include_alpha=include_alpha, branch_cap=branch_cap)
    cells = [c for c in res.cells if c.dim >= 2]
    if res.status == "undetermined":
        return FirstIntegralSet("undetermined", cells, deg=deg, reason=res.reason)
    witnesses = []
    for c in cells:
        basis = c.kernel
        ref = next((p for p in basis if p.is_constant()), basis[-1])
        for p in basis:
            if p is ref:
                continue
            H = p / ref
            if apply_field(X, H) != 0:
                raise AssertionError("first integral failed re-verification")
            witnesses.append(H)
    return FirstIntegralSet("found" if witnesses else "empty", cells, witnesses, deg=deg)



@dataclass
class CoupledResult:
    """Outcome of the coupled search X P + g Q = L P, X Q + P = L Q."""

    status: str  # "empty", "found" or "undetermined"
    solutions: list[tuple[dict[str, str], int]] = field(default_factory=list)
    branches: int = 0
    sizes: tuple[int, int] = (0, 0)
    reason: str = ""


def _weighted_monomials(coords: list[int], deg: int, weight: int) -> list[tuple[int, ...]]:
    from ..grading import monomial_weight

    return [m for m in _monomials(coords, deg) if monomial_weight(m) == weight]


def coupled_cofactor_search(
    X: VectorField,
    coupling: RatExpr,
    cofactor: RatExpr,
    deg: int,
    weight: int,
    *,
    include_alpha: bool | None = None,
    branch_cap: int = BRANCH_CAP,
) -> CoupledResult:
    """Polynomials (P, Q), not both zero, with X P + g Q = l L P and X Q + P = l L Q.

    ``l`` is a free scalar and ``cofactor`` the fixed monomial direction L.
    P has Sigma-weight ``weight`` and Q weight ``weight + 1``, both of total
    degree <= ``deg``.  Each leaf of the case split on ``l`` with a nonzero
    kernel is reported with the value of ``l`` and the kernel dimension.
    """
    _check_polynomial(X)
    coords = _field_coords(X, include_alpha)
    pm = _weighted_monomials(coords, deg, weight)
    qm = _weighted_monomials(coords, deg, weight + 1)
    F, l0 = frac_field("l0", QQ)
    rows: dict[tuple, dict[int, Any]] = {}

    def put(eq: int, img: RatExpr, col: int, scale=None) -> None:
        for mm, c in img.num.items():
            row = rows.setdefault((eq, mm), {})
            val = F(QQ(c)) if scale is None else F(QQ(c)) * scale
            row[col] = row.get(col, F(0)) + val

    for k, m in enumerate(pm):
        e = RatExpr(LaurentPoly({m: 1}, check=False), canonical=True)
        put(0, apply_field(X, e), k)
        put(0, cofactor * e, k, -l0)
        put(1, e, k)
    for k, m in enumerate(qm):
        col = len(pm) + k
        e = RatExpr(LaurentPoly({m: 1}, check=False), canonical=True)
        put(0, coupling * e, col)
        put(1, apply_field(X, e), col)
        put(1, cofactor * e, col, -l0)
    ncols = len(pm) + len(qm)
    matrix = [r for r in ({k: v for k, v in rows[key].items() if v != 0} for key in sorted(rows, key=repr)) if r]
    out = CoupledResult("empty", sizes=(len(pm), len(qm)))
    if not ncols:
        return out
    leaves: list = []
    counter = [0]
    try:
        _eliminate(F, F.ring, matrix, [], {}, leaves, counter, branch_cap, ncols)
    except _Undetermined as exc:
        out.status = "undetermined"
        out.reason = str(exc)
    out.branches = counter[0]
    for assignment, rref_rows, pivots in leaves:
        kernel = _leaf_kernel(rref_rows, pivots, ncols, pm + qm)
        if kernel:
            out.solutions.append(({str(k): str(v) for k, v in assignment.items()}, len(kernel)))
    if out.solutions and out.status != "undetermined":
        out.status = "found"
    return out

__all__ = [
    "DarbouxCell",
    "DarbouxResult",
    "FirstIntegralSet",
    "darboux_search",
    "rational_first_integrals",
    "admissible_cofactor_monomials",
    "BRANCH_CAP",
    "CoupledResult",
    "coupled_cofactor_search",
]
