"""Exterior calculus on chart A ``(x, y, yp, alpha)`` and chart B ``(x, y, u, alpha)``.

Basis index ``i`` of a form refers to the ``i``-th chart coordinate: 0 is dx,
1 is dy, 2 is dyp (chart A) or du (chart B) and 3 is dalpha.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from .expr.poly import VARS
from .expr.printing import BASIS_NAMES, format_kform, format_ratexpr
from .expr.ratexpr import COORDS, Chart, ChartError, RatExpr, partial_derivative, to_chart

MAX_DEGREE = 4
COORD_NAMES = {chart: tuple(VARS[i] for i in idx) for chart, idx in COORDS.items()}


def _check_chart(e: RatExpr, chart: Chart) -> RatExpr:
    found = e.chart()
    if found is not None and found is not chart:
        raise ChartError(f"coefficient {e} does not belong to {chart}")
    return e


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting idx, or 0 when an index repeats."""
    if len(set(idx)) != len(idx):
        return 0, ()
    arr = list(idx)
    sign = 1
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


class KForm:
    """Differential k-form with rational coefficients."""

    __slots__ = ("chart", "degree", "_terms")

    def __init__(self, chart: Chart, degree: int, terms: Mapping[tuple[int, ...], RatExpr] | None = None, *, check: bool = True):
        if not 0 <= degree <= MAX_DEGREE:
            raise ValueError(f"form degree {degree} out of range")
        self.chart = chart
        self.degree = degree
        clean: dict[tuple[int, ...], RatExpr] = {}
        for idx, c in (terms or {}).items():
            if check:
                idx = tuple(idx)
                if len(idx) != degree or any(not 0 <= i < 4 for i in idx) or list(idx) != sorted(set(idx)):
                    raise ValueError(f"bad basis tuple {idx!r} for a {degree}-form")
                if not isinstance(c, RatExpr):
                    c = RatExpr.const(c)
                _check_chart(c, chart)
            if not c.is_zero:
                clean[idx] = c
        self._terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "KForm":
        return cls(chart, degree)

    @classmethod
    def function(cls, chart: Chart, f) -> "KForm":
        if not isinstance(f, RatExpr):
            f = RatExpr.const(f)
        return cls(chart, 0, {(): f})

    @classmethod
    def basis(cls, chart: Chart, *idx: int) -> "KForm":
        sign, key = _sort_sign(idx)
        if not sign:
            return cls(chart, len(idx))
        return cls(chart, len(idx), {key: RatExpr.const(sign)})

    @classmethod
    def one_form(cls, chart: Chart, coeffs: Sequence) -> "KForm":
        return cls(chart, 1, {(i,): c if isinstance(c, RatExpr) else RatExpr.const(c) for i, c in enumerate(coeffs)})

    @classmethod
    def volume(cls, chart: Chart = Chart.A) -> "KForm":
        return cls.basis(chart, 0, 1, 2)

    # -- accessors ------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], RatExpr]:
        return dict(self._terms)

    def coefficient(self, idx: Iterable[int]) -> RatExpr:
        return self._terms.get(tuple(idx), RatExpr.zero())

    def __getitem__(self, idx) -> RatExpr:
        if isinstance(idx, int):
            idx = (idx,)
        return self.coefficient(idx)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, KForm):
            if self.is_zero and other.is_zero:
                return True
            return self.chart is other.chart and self.degree == other.degree and self._terms == other._terms
        if isinstance(other, (int, RatExpr)) and self.degree == 0:
            return self.coefficient(()) == other
        if other == 0:
            return self.is_zero
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.chart, self.degree, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"KForm<{self.chart},{self.degree}>({format_kform(self)!r})"

    def __str__(self) -> str:
        return format_kform(self)

    def to_text(self) -> str:
        return format_kform(self)

    # -- linear structure ---------------------------------------------
    def _same(self, other: "KForm") -> None:
        if not isinstance(other, KForm):
            raise TypeError("expected a KForm")
        if other.chart is not self.chart:
            raise ChartError("chart mismatch")
        if other.degree != self.degree:
            raise ValueError("degree mismatch")

    def __add__(self, other) -> "KForm":
        if isinstance(other, (int, RatExpr)) and self.degree == 0:
            other = KForm.function(self.chart, other)
        self._same(other)
        acc = dict(self._terms)
        for idx, c in other._terms.items():
            acc[idx] = acc[idx] + c if idx in acc else c
        return KForm(self.chart, self.degree, acc, check=False)

    __radd__ = __add__

    def __neg__(self) -> "KForm":
        return KForm(self.chart, self.degree, {i: -c for i, c in self._terms.items()}, check=False)

    def __sub__(self, other) -> "KForm":
        return self + (-other)

    def scale(self, f) -> "KForm":
        if not isinstance(f, RatExpr):
            f = RatExpr.const(f)
        _check_chart(f, self.chart)
        if f.is_zero:
            return KForm(self.chart, self.degree)
        return KForm(self.chart, self.degree, {i: c * f for i, c in self._terms.items()}, check=False)

    def __mul__(self, other) -> "KForm":
        if isinstance(other, KForm):
            return self.wedge(other)
        return self.scale(other)

    def __rmul__(self, other) -> "KForm":
        return self.scale(other)

    def map_coefficients(self, fn: Callable[[RatExpr], RatExpr]) -> "KForm":
        return KForm(self.chart, self.degree, {i: fn(c) for i, c in self._terms.items()})

    def drop_dalpha(self) -> "KForm":
        return KForm(self.chart, self.degree, {i: c for i, c in self._terms.items() if 3 not in i}, check=False)

    def uses_alpha(self) -> bool:
        return any(3 in i or c.uses("alpha") for i, c in self._terms.items())

    # -- exterior algebra -------------------------------------------------
    def wedge(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def d(self) -> "KForm":
        return exterior_derivative(self)

    def interior(self, X: "VectorField") -> "KForm":
        return interior_product(X, self)

    def __call__(self, X: "VectorField") -> RatExpr:
        """Evaluate a 1-form on a vector field."""
        if self.degree != 1:
            raise ValueError("only 1-forms can be evaluated on a vector field")
        return interior_product(X, self).coefficient(())


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product with graded anticommutativity."""
    if a.chart is not b.chart and not (a.is_zero or b.is_zero):
        raise ChartError("chart mismatch in wedge")
    deg = a.degree + b.degree
    if deg > MAX_DEGREE:
        raise ValueError(f"wedge of degree {deg} exceeds {MAX_DEGREE}")
    acc: dict[tuple[int, ...], RatExpr] = {}
    for ia, ca in a._terms.items():
        for ib, cb in b._terms.items():
            sign, key = _sort_sign(ia + ib)
            if not sign:
                continue
            term = ca * cb
            if sign < 0:
                term = -term
            acc[key] = acc[key] + term if key in acc else term
    return KForm(a.chart, deg, acc, check=False)


def differential(f: RatExpr, chart: Chart) -> KForm:
    """df as a 1-form in the given chart."""
    terms = {}
    for k, name in enumerate(COORD_NAMES[chart]):
        c = partial_derivative(f, name, chart)
        if not c.is_zero:
            terms[(k,)] = c
    return KForm(chart, 1, terms, check=False)


def exterior_derivative(w: KForm) -> KForm:
    if w.degree >= MAX_DEGREE:
        return KForm(w.chart, MAX_DEGREE)
    acc: dict[tuple[int, ...], RatExpr] = {}
    for idx, c in w._terms.items():
        for k, name in enumerate(COORD_NAMES[w.chart]):
            if k in idx:
                continue
            dc = partial_derivative(c, name, w.chart)
            if dc.is_zero:
                continue
            sign, key = _sort_sign((k,) + idx)
            term = dc if sign > 0 else -dc
            acc[key] = acc[key] + term if key in acc else term
    return KForm(w.chart, w.degree + 1, acc, check=False)


class VectorField:
    """Vector field sum_i X_i d/d(coordinate i) with rational coefficients."""

    __slots__ = ("chart", "_comps")

    def __init__(self, chart: Chart, comps: Mapping[int | str, RatExpr] | Sequence | None = None):
        self.chart = chart
        clean: dict[int, RatExpr] = {}
        items = comps.items() if isinstance(comps, Mapping) else enumerate(comps or ())
        names = COORD_NAMES[chart]
        for key, c in items:
            if isinstance(key, str):
                key = "yp" if key == "y'" else key
                if key not in names:
                    raise ValueError(f"{key} is not a coordinate of {chart}")
                key = names.index(key)
            if not isinstance(c, RatExpr):
                c = RatExpr.const(c)
            _check_chart(c, chart)
            if not c.is_zero:
                clean[key] = c
        self._comps = clean

    @property
    def components(self) -> dict[int, RatExpr]:
        return dict(self._comps)

    def component(self, k: int | str) -> RatExpr:
        if isinstance(k, str):
            k = COORD_NAMES[self.chart].index("yp" if k == "y'" else k)
        return self._comps.get(k, RatExpr.zero())

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        if not self._comps and not other._comps:
            return True
        return self.chart is other.chart and self._comps == other._comps

    def __hash__(self) -> int:
        return hash((self.chart, frozenset(self._comps.items())))

    def __repr__(self) -> str:
        return f"VectorField<{self.chart}>({self.to_text()!r})"

    def to_text(self) -> str:
        names = COORD_NAMES[self.chart]
        if not self._comps:
            return "0"
        return " + ".join(f"({format_ratexpr(c)})*d/d{names[k]}" for k, c in sorted(self._comps.items()))

    def __call__(self, f: RatExpr) -> RatExpr:
        return apply_field(self, f)

    def __add__(self, other: "VectorField") -> "VectorField":
        if other.chart is not self.chart:
            raise ChartError("chart mismatch")
        acc = dict(self._comps)
        for k, c in other._comps.items():
            acc[k] = acc[k] + c if k in acc else c
        return VectorField(self.chart, acc)

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, {k: -c for k, c in self._comps.items()})

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def scale(self, f) -> "VectorField":
        if not isinstance(f, RatExpr):
            f = RatExpr.const(f)
        return VectorField(self.chart, {k: c * f for k, c in self._comps.items()})

    def __rmul__(self, f) -> "VectorField":
        return self.scale(f)

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self._comps.values())


def apply_field(X: VectorField, f: RatExpr) -> RatExpr:
    """Directional derivative X(f)."""
    if not isinstance(f, RatExpr):
        f = RatExpr.const(f)
    _check_chart(f, X.chart)
    if f.is_constant():
        return RatExpr.zero()
    names = COORD_NAMES[X.chart]
    total = RatExpr.zero()
    for k, c in X._comps.items():
        dc = partial_derivative(f, names[k], X.chart)
        if not dc.is_zero:
            total = total + c * dc
    return total


def interior_product(X: VectorField, w: KForm) -> KForm:
    """i_X w, contracting against the first slot of each basis tuple."""
    if w.degree == 0:
        raise ValueError("interior product of a 0-form")
    if X.chart is not w.chart and not w.is_zero and X._comps:
        raise ChartError("chart mismatch in interior product")
    acc: dict[tuple[int, ...], RatExpr] = {}
    for idx, c in w._terms.items():
        for p, k in enumerate(idx):
            xk = X._comps.get(k)
            if xk is None:
                continue
            key = idx[:p] + idx[p + 1 :]
            term = c * xk
            if p % 2:
                term = -term
            acc[key] = acc[key] + term if key in acc else term
    return KForm(w.chart, w.degree - 1, acc, check=False)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    if X.chart is not Y.chart:
        raise ChartError("chart mismatch in Lie bracket")
    comps = {}
    for k in set(X._comps) | set(Y._comps):
        comps[k] = apply_field(X, Y.component(k)) - apply_field(Y, X.component(k))
    return VectorField(X.chart, comps)


def lie_derivative(X: VectorField, w):
    """L_X on functions (directional derivative) or forms (Cartan formula)."""
    if isinstance(w, RatExpr):
        return apply_field(X, w)
    if w.degree == 0:
        return KForm.function(w.chart, apply_field(X, w.coefficient(())))
    return interior_product(X, exterior_derivative(w)) + exterior_derivative(interior_product(X, w))


def lie_derivative_direct(X: VectorField, w: KForm) -> KForm:
    """L_X w computed from the coordinate formula, independent of Cartan's identity."""
    if w.degree == 0:
        return KForm.function(w.chart, apply_field(X, w.coefficient(())))
    names = COORD_NAMES[w.chart]
    out = KForm(w.chart, w.degree)
    for idx, c in w._terms.items():
        term = KForm(w.chart, w.degree, {idx: apply_field(X, c)})
        for p, k in enumerate(idx):
            dxk = differential(X.component(k), w.chart)
            left = KForm.basis(w.chart, *idx[:p]) if p else KForm.function(w.chart, 1)
            right = KForm.basis(w.chart, *idx[p + 1 :]) if p + 1 < len(idx) else KForm.function(w.chart, 1)
            term = term + left.wedge(dxk).wedge(right).scale(c)
        out = out + term
    return out


# ---------------------------------------------------------------------------
# pullback


def pullback(images: Mapping[str, RatExpr], w, *, target: Chart | None = None, source: Chart | None = None):
    """Pull back a function or form along a named substitution.

    ``images`` maps source symbols to expressions in the target chart.
    Coordinates not listed map to themselves.  The differential of a
    coordinate image is taken in the target chart.
    """
    if isinstance(w, RatExpr):
        return w.subs(images)
    source = source or w.chart
    target = target or source
    names = COORD_NAMES[source]
    basis_imgs: list[KForm] = []
    for k, name in enumerate(names):
        img = images.get(name)
        if img is None:
            img = RatExpr.var(name)
        basis_imgs.append(differential(img, target))
    out = KForm(target, w.degree)
    for idx, c in w._terms.items():
        piece = KForm.function(target, c.subs(images))
        for k in idx:
            piece = piece.wedge(basis_imgs[k])
        out = out + piece
    return out


def chart_convert(e, target: Chart):
    """Rewrite a function, form or vector field in the other chart."""
    if isinstance(e, RatExpr):
        return to_chart(e, target)
    if isinstance(e, VectorField):
        if e.chart is target:
            return e
        # push forward: new component j = X(coordinate_j of target chart)
        comps = {}
        src_names = COORD_NAMES[e.chart]
        for j, name in enumerate(COORD_NAMES[target]):
            if name in src_names:
                val = e.component(name)
            else:
                coord = RatExpr.var(name)
                coord_src = to_chart(_target_coord_in_source(name, e.chart), e.chart)
                val = apply_field(e, coord_src)
            comps[j] = to_chart(val, target)
        return VectorField(target, comps)
    if e.chart is target:
        return e
    if target is Chart.B:
        images = {"yp": RatExpr.var("s")}
    else:
        images = {"s": RatExpr.var("yp"), "u": RatExpr.var("yp") ** 2 - 4 * RatExpr.var("y") ** 3}
    return pullback(images, e, target=target, source=e.chart)


def _target_coord_in_source(name: str, source: Chart) -> RatExpr:
    if name == "u":
        return RatExpr.var("yp") ** 2 - 4 * RatExpr.var("y") ** 3
    if name == "yp":
        return RatExpr.var("s")
    return RatExpr.var(name)


# ---------------------------------------------------------------------------
# frames and integrability


def coframe_decompose(w: KForm, frame: Sequence[KForm]) -> list[RatExpr]:
    """Coefficients c with w = sum c_i frame_i, by Cramer's rule with wedges."""
    if len(frame) != 3 or w.degree != 1 or any(f.degree != 1 for f in frame):
        raise ValueError("coframe_decompose expects a 1-form and three 1-forms")
    vol = frame[0].wedge(frame[1]).wedge(frame[2])
    if vol.is_zero:
        raise ValueError("singular frame")
    key = min(vol.terms)
    base = vol.coefficient(key)
    cols = []
    for i in range(3):
        f = list(frame)
        f[i] = w
        num = f[0].wedge(f[1]).wedge(f[2])
        cols.append(num.coefficient(key) / base)
    check = KForm(w.chart, 1)
    for c, f in zip(cols, frame):
        check = check + f.scale(c)
    if check != w:
        raise ValueError("form is not in the span of the frame")
    return cols


def integrability_defect(w: KForm) -> KForm:
    if w.degree != 1:
        raise ValueError("integrability_defect expects a 1-form")
    return w.wedge(exterior_derivative(w))


# ---------------------------------------------------------------------------
# matrices of forms


class FormMatrix:
    """Rectangular matrix of forms; ``MatForm`` is the 2x2 degree-1 case."""

    __slots__ = ("chart", "rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[KForm]], chart: Chart | None = None):
        self.entries = tuple(tuple(e for e in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        charts = {e.chart for row in self.entries for e in row if not e.is_zero}
        if len(charts) > 1:
            raise ChartError("entries of a form matrix share one chart")
        self.chart = chart or (charts.pop() if charts else Chart.A)

    @classmethod
    def zero(cls, rows: int, cols: int, degree: int, chart: Chart = Chart.A) -> "FormMatrix":
        return cls([[KForm(chart, degree) for _ in range(cols)] for _ in range(rows)], chart)

    def __getitem__(self, ij) -> KForm:
        i, j = ij
        return self.entries[i][j]

    def map(self, fn: Callable[[KForm], KForm]) -> "FormMatrix":
        return FormMatrix([[fn(e) for e in row] for row in self.entries], self.chart)

    def __add__(self, other: "FormMatrix") -> "FormMatrix":
        return FormMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.chart)

    def __sub__(self, other: "FormMatrix") -> "FormMatrix":
        return FormMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.chart)

    def __neg__(self) -> "FormMatrix":
        return self.map(lambda e: -e)

    def scale(self, f) -> "FormMatrix":
        return self.map(lambda e: e.scale(f))

    def wedge(self, other: "FormMatrix") -> "FormMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix wedge")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = None
                for k in range(self.cols):
                    term = self.entries[i][k].wedge(other.entries[k][j])
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(row)
        return FormMatrix(out, self.chart)

    def d(self) -> "FormMatrix":
        return self.map(exterior_derivative)

    def interior(self, X: VectorField) -> "FormMatrix":
        return self.map(lambda e: interior_product(X, e))

    @property
    def degree(self) -> int:
        return self.entries[0][0].degree

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.entries for e in row)

    def trace(self) -> KForm:
        acc = self.entries[0][0]
        for i in range(1, min(self.rows, self.cols)):
            acc = acc + self.entries[i][i]
        return acc

    @property
    def trace_zero(self) -> bool:
        return self.trace().is_zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def to_text(self) -> list[list[str]]:
        return [[e.to_text() for e in row] for row in self.entries]

    def __repr__(self) -> str:
        return f"FormMatrix({self.to_text()!r})"


def MatForm(entries: Sequence[Sequence[KForm]], chart: Chart | None = None) -> FormMatrix:
    """2x2 matrix of 1-forms."""
    m = FormMatrix(entries, chart)
    if m.rows != 2 or m.cols != 2 or any(e.degree != 1 for row in m.entries for e in row):
        raise ValueError("MatForm expects a 2x2 array of 1-forms")
    return m


def matrix_bracket(N, M: FormMatrix) -> FormMatrix:
    """[N, M] = N M - M N for a 2x2 function matrix N and a form matrix M."""
    out = []
    for i in range(M.rows):
        row = []
        for j in range(M.cols):
            acc = KForm(M.chart, M.degree)
            for k in range(M.rows):
                if N[i][k]:
                    acc = acc + M.entries[k][j].scale(N[i][k])
                if N[k][j]:
                    acc = acc - M.entries[i][k].scale(N[k][j])
            row.append(acc)
        out.append(row)
    return FormMatrix(out, M.chart)


def evaluate_on(M: FormMatrix, X: VectorField) -> list[list[RatExpr]]:
    """Matrix of functions M(X) for a matrix of 1-forms."""
    return [[e(X) for e in row] for row in M.entries]


def column(forms: Sequence[KForm]) -> FormMatrix:
    return FormMatrix([[f] for f in forms])


__all__ = [
    "KForm",
    "VectorField",
    "FormMatrix",
    "MatForm",
    "wedge",
    "exterior_derivative",
    "differential",
    "interior_product",
    "lie_bracket",
    "lie_derivative",
    "lie_derivative_direct",
    "apply_field",
    "pullback",
    "chart_convert",
    "coframe_decompose",
    "integrability_defect",
    "matrix_bracket",
    "evaluate_on",
    "column",
    "BASIS_NAMES",
]
