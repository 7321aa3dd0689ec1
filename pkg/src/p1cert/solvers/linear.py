"""Exact coefficient matching for linear equations over a finite ansatz.

Structured values (functions, forms, vector fields, form matrices and tuples
of these) are flattened into scalar slots.  Each slot is brought to a common
denominator and the numerators are matched monomial by monomial, with
``s^0`` and ``s^1`` treated as independent.  The resulting sparse system over
Q is reduced with sympy's sparse RREF, which fixes a unique, deterministic
particular solution and kernel basis for a given atom order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from gmpy2 import mpq
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from ..exterior import FormMatrix, KForm, VectorField
from ..expr.poly import LaurentPoly
from ..expr.ratexpr import RatExpr

DEFAULT_CAP = 20000


def flatten(value) -> dict[tuple, RatExpr]:
    """Scalar slots of a structured value; zero slots are omitted."""
    out: dict[tuple, RatExpr] = {}
    _flatten_into(value, (), out)
    return out


def _flatten_into(value, prefix: tuple, out: dict) -> None:
    if isinstance(value, RatExpr):
        if not value.is_zero:
            out[prefix] = value
    elif isinstance(value, (int, mpq)):
        if value:
            out[prefix] = RatExpr.const(value)
    elif isinstance(value, KForm):
        for idx, c in value.terms.items():
            out[prefix + ("f", value.degree) + idx] = c
    elif isinstance(value, VectorField):
        for k, c in value.components.items():
            out[prefix + ("v", k)] = c
    elif isinstance(value, FormMatrix):
        for i, row in enumerate(value.entries):
            for j, e in enumerate(row):
                _flatten_into(e, prefix + ("m", i, j), out)
    elif isinstance(value, (list, tuple)):
        for k, v in enumerate(value):
            _flatten_into(v, prefix + (k,), out)
    else:
        raise TypeError(f"cannot flatten {type(value).__name__}")


def combine(coeffs: Sequence, atoms: Sequence):
    """sum_k coeffs[k] * atoms[k] for structured atoms."""
    total = None
    for c, a in zip(coeffs, atoms):
        if not c:
            continue
        term = _scale(a, c)
        total = term if total is None else _add(total, term)
    if total is None:
        return _zero_like(atoms[0]) if atoms else RatExpr.zero()
    return total


def _scale(a, c):
    if isinstance(a, RatExpr):
        return a.scale(c)
    if isinstance(a, (list, tuple)):
        return type(a)(_scale(x, c) for x in a)
    return a.scale(RatExpr.const(c))


def _add(a, b):
    if isinstance(a, (list, tuple)):
        return type(a)(_add(x, y) for x, y in zip(a, b))
    return a + b


def _zero_like(a):
    if isinstance(a, RatExpr):
        return RatExpr.zero()
    if isinstance(a, KForm):
        return KForm(a.chart, a.degree)
    if isinstance(a, VectorField):
        return VectorField(a.chart, {})
    if isinstance(a, FormMatrix):
        return FormMatrix.zero(a.rows, a.cols, a.degree, a.chart)
    if isinstance(a, (list, tuple)):
        return type(a)(_zero_like(x) for x in a)
    raise TypeError(type(a).__name__)


def is_zero_value(v) -> bool:
    return not flatten(v)


def values_equal(a, b) -> bool:
    return flatten(a) == flatten(b)


def _lcm_polys(dens: list[LaurentPoly]) -> LaurentPoly:
    acc = None
    for d in dens:
        if acc is None:
            acc = d
            continue
        if d == acc:
            continue
        pa, _ = acc.to_ring()
        pd, _ = d.to_ring()
        acc = LaurentPoly.from_ring(pa.lcm(pd))
    return acc


def _exquo(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if b.is_constant():
        return a.scale(1 / b.constant_value())
    pa, _ = a.to_ring()
    pb, _ = b.to_ring()
    return LaurentPoly.from_ring(pa.exquo(pb))


def coefficient_rows(columns: Sequence[dict[tuple, RatExpr]]) -> dict[tuple, dict[int, mpq]]:
    """Rows of the matching system: (slot, monomial) -> {column: coefficient}."""
    slots: dict[tuple, list[tuple[int, RatExpr]]] = {}
    for k, col in enumerate(columns):
        for slot, val in col.items():
            slots.setdefault(slot, []).append((k, val))
    rows: dict[tuple, dict[int, mpq]] = {}
    for slot in sorted(slots, key=repr):
        entries = slots[slot]
        dens = {}
        for _, v in entries:
            dens.setdefault(v.den, None)
        lcm = _lcm_polys(list(dens))
        factors = {d: _exquo(lcm, d) for d in dens}
        for k, v in entries:
            num = v.num * factors[v.den]
            for m, c in num.items():
                rows.setdefault((slot, m), {})[k] = c
    return rows


@dataclass
class LinearResult:
    """Raw affine solution set in coordinates over the atom list."""

    consistent: bool
    particular: list[mpq] | None
    kernel: list[list[mpq]]
    rank: int
    equations: int


def solve_coordinates(columns: Sequence[dict[tuple, RatExpr]], target: dict[tuple, RatExpr]) -> LinearResult:
    """Solve sum_k theta_k columns[k] = target over Q."""
    n = len(columns)
    rows = coefficient_rows(list(columns) + [target])
    sdm: dict[int, dict[int, Any]] = {}
    for i, key in enumerate(sorted(rows, key=repr)):
        row = rows[key]
        sdm[i] = {j: QQ(c) for j, c in row.items() if c}
    if not sdm:
        return LinearResult(True, [mpq(0)] * n, [[mpq(1) if i == j else mpq(0) for i in range(n)] for j in range(n)], 0, 0)
    M = DomainMatrix(sdm, (len(sdm), n + 1), QQ)
    R, pivots = M.rref()
    R = R.to_sdm()
    if n in pivots:
        return LinearResult(False, None, [], len(pivots), len(sdm))
    pivot_row = {}
    for i, p in enumerate(pivots):
        pivot_row[p] = R.get(i, {})
    particular = [mpq(0)] * n
    for p, row in pivot_row.items():
        particular[p] = mpq(row.get(n, 0))
    free = [j for j in range(n) if j not in pivot_row]
    kernel = []
    for f in free:
        v = [mpq(0)] * n
        v[f] = mpq(1)
        for p, row in pivot_row.items():
            c = row.get(f)
            if c:
                v[p] = -mpq(c)
        kernel.append(v)
    return LinearResult(True, particular, kernel, len(pivots), len(sdm))


def independent_subset(atoms: Sequence) -> list[int]:
    """Indices of a maximal independent subset, greedy in the given order."""
    cols = [flatten(a) for a in atoms]
    rows = coefficient_rows(cols)
    if not rows:
        return []
    sdm = {i: {j: QQ(c) for j, c in rows[k].items()} for i, k in enumerate(sorted(rows, key=repr))}
    M = DomainMatrix(sdm, (len(sdm), len(atoms)), QQ)
    _, pivots = M.rref()
    return list(pivots)


@dataclass
class SolutionSet:
    """Affine solution set ``particular + span(kernel)`` inside an ansatz."""

    status: str  # "empty", "affine" or "undetermined"
    particular: Any = None
    kernel: list = field(default_factory=list)
    ansatz: Any = None
    atoms: list = field(default_factory=list)
    particular_coords: list | None = None
    kernel_coords: list = field(default_factory=list)
    reason: str = ""
    verified: bool = False

    @property
    def is_empty(self) -> bool:
        return self.status == "empty"

    @property
    def is_undetermined(self) -> bool:
        return self.status == "undetermined"

    @property
    def dim(self) -> int:
        return len(self.kernel) if self.status == "affine" else -1

    def elements(self) -> list:
        if self.status != "affine":
            return []
        return [self.particular] + list(self.kernel)

    def contains(self, value) -> bool:
        """True when value lies in particular + span(kernel)."""
        if self.status != "affine":
            return False
        diff = _add(value, _scale(self.particular, -1))
        if is_zero_value(diff):
            return True
        if not self.kernel:
            return False
        res = solve_coordinates([flatten(k) for k in self.kernel], flatten(diff))
        return res.consistent

    def is_homogeneous_zero(self) -> bool:
        """Only the zero solution (for homogeneous equations)."""
        return self.status == "affine" and not self.kernel and is_zero_value(self.particular)

    def texts(self) -> dict[str, Any]:
        def txt(v):
            if isinstance(v, FormMatrix):
                return v.to_text()
            if isinstance(v, (list, tuple)):
                return [txt(x) for x in v]
            return v.to_text()

        return {
            "status": self.status,
            "particular": txt(self.particular) if self.particular is not None else None,
            "kernel": [txt(k) for k in self.kernel],
        }


def solve_linear(
    operator: Callable[[Any], Any],
    atoms: Sequence,
    target,
    *,
    ansatz=None,
    affine: bool = False,
    independent: bool = False,
    cap: int = DEFAULT_CAP,
    verify: bool = True,
) -> SolutionSet:
    """All combinations v = sum theta_k atoms[k] with operator(v) = target.

    ``operator`` must be linear, or affine when ``affine`` is set (then
    operator(0) is subtracted).  Atoms need not be independent unless
    ``independent`` is asserted; dependent atoms are dropped greedily.
    """
    atoms = list(atoms)
    if len(atoms) > cap:
        return SolutionSet("undetermined", ansatz=ansatz, reason=f"ansatz size {len(atoms)} exceeds cap {cap}")
    if not atoms:
        ok = not affine and is_zero_value(target)
        return SolutionSet("affine" if ok else "empty", particular=_zero_like(target) if ok else None, ansatz=ansatz)
    if not independent:
        keep = independent_subset(atoms)
        atoms = [atoms[i] for i in keep]
        if not atoms:
            return solve_linear(operator, [], target, ansatz=ansatz, affine=affine, cap=cap)
    base = operator(_zero_like(atoms[0])) if affine else None
    columns = []
    for a in atoms:
        img = operator(a)
        if affine:
            img = _add(img, _scale(base, -1))
        columns.append(flatten(img))
    tgt = target if not affine else _add(target, _scale(base, -1))
    res = solve_coordinates(columns, flatten(tgt))
    if not res.consistent:
        return SolutionSet("empty", ansatz=ansatz, atoms=atoms, reason="inconsistent coefficient system")
    particular = combine(res.particular, atoms)
    kernel = [combine(v, atoms) for v in res.kernel]
    out = SolutionSet(
        "affine",
        particular=particular,
        kernel=kernel,
        ansatz=ansatz,
        atoms=atoms,
        particular_coords=res.particular,
        kernel_coords=res.kernel,
    )
    if verify:
        if not values_equal(operator(particular), target):
            raise AssertionError("particular solution failed re-verification")
        for k in kernel:
            img = operator(k)
            if affine:
                img = _add(img, _scale(base, -1))
            if not is_zero_value(img):
                raise AssertionError("kernel element failed re-verification")
        out.verified = True
    return out


__all__ = [
    "SolutionSet",
    "LinearResult",
    "solve_linear",
    "solve_coordinates",
    "independent_subset",
    "flatten",
    "combine",
    "coefficient_rows",
    "values_equal",
    "is_zero_value",
    "DEFAULT_CAP",
]
