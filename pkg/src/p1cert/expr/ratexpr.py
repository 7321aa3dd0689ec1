"""Reduced rational functions over Q, with the quadratic symbol s.

A :class:`RatExpr` stores ``num/den`` in a unique canonical form:

* ``den`` is an s-free polynomial with leading coefficient 1 (grlex);
* ``den`` carries no monomial factor in ``yp``, ``alpha`` or ``u``; such
  factors are moved into negative exponents of ``num``;
* ``gcd(num, den) = 1``.

Two charts are supported.  Chart A uses coordinates ``(x, y, yp)`` and chart B
uses ``(x, y, u)`` with ``s = sqrt(4*y^3 + u)`` playing the role of ``yp``.
``alpha`` may appear in either chart.
"""

from __future__ import annotations

from enum import Enum
from typing import Mapping

from gmpy2 import mpq

from .poly import (
    IALPHA,
    IS,
    IU,
    IX,
    IY,
    IYP,
    LAURENT,
    NVARS,
    VARS,
    ZERO_EXP,
    LaurentPoly,
    S_SQUARED,
)


class Chart(Enum):
    A = "A"
    B = "B"

    def __str__(self) -> str:
        return f"CHART_{self.value}"


COORDS: dict[Chart, tuple[int, ...]] = {
    Chart.A: (IX, IY, IYP, IALPHA),
    Chart.B: (IX, IY, IU, IALPHA),
}
FORBIDDEN: dict[Chart, tuple[int, ...]] = {Chart.A: (IU, IS), Chart.B: (IYP,)}

_ONE = LaurentPoly.const(1)
_ZERO = LaurentPoly()
_S = LaurentPoly.var("s")


class ChartError(ValueError):
    """An expression mixes chart A and chart B symbols."""


def _canonical(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if den.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero:
        return _ZERO, _ONE
    if den.uses(IS):
        a, b = den.s_split()
        conj = a - b * _S
        num = num * conj
        den = den * conj
    lo_n = num.min_exponents()
    lo_d = den.min_exponents()
    if any(lo_n):
        num = num.shift(tuple(-e for e in lo_n))
    if any(lo_d):
        den = den.shift(tuple(-e for e in lo_d))
    mono = [a - b for a, b in zip(lo_n, lo_d)]
    if den.is_constant():
        c = den.constant_value()
        num = num.scale(1 / c)
        den = _ONE
    elif num.is_constant():
        lm, lc = den.leading_term()
        num = num.scale(1 / lc)
        den = den.scale(1 / lc)
    else:
        pn, _ = num.to_ring()
        pd, _ = den.to_ring()
        g = pn.gcd(pd)
        if not g.is_ground:
            pn = pn.exquo(g)
            pd = pd.exquo(g)
        lc = pd.LC
        num = LaurentPoly.from_ring(pn).scale(1 / mpq(lc))
        den = LaurentPoly.from_ring(pd).scale(1 / mpq(lc))
    # Reattach the monomial content.
    num_shift = [0] * NVARS
    den_shift = [0] * NVARS
    for i, e in enumerate(mono):
        if e >= 0 or i in LAURENT:
            num_shift[i] = e
        else:
            den_shift[i] = -e
    if any(num_shift):
        num = num.shift(num_shift)
    if any(den_shift):
        den = den.shift(den_shift)
    return num, den


class RatExpr:
    """Immutable canonical rational function."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, num: LaurentPoly | int | mpq = 0, den: LaurentPoly | int | mpq = 1, *, canonical: bool = False):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly.const(num)
        if not isinstance(den, LaurentPoly):
            den = LaurentPoly.const(den)
        if not canonical:
            num, den = _canonical(num, den)
        self._num = num
        self._den = den
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "RatExpr":
        return _RZERO

    @classmethod
    def one(cls) -> "RatExpr":
        return _RONE

    @classmethod
    def const(cls, c) -> "RatExpr":
        c = mpq(c)
        if not c:
            return _RZERO
        return cls(LaurentPoly.const(c), _ONE, canonical=True)

    @classmethod
    def var(cls, name: str) -> "RatExpr":
        if name == "y'":
            name = "yp"
        return cls(LaurentPoly.var(name), _ONE, canonical=True)

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RatExpr":
        return cls(p, _ONE)

    # -- accessors ------------------------------------------------------
    @property
    def num(self) -> LaurentPoly:
        return self._num

    @property
    def den(self) -> LaurentPoly:
        return self._den

    @property
    def is_zero(self) -> bool:
        return self._num.is_zero

    def __bool__(self) -> bool:
        return not self._num.is_zero

    def is_constant(self) -> bool:
        return self._den == _ONE and self._num.is_constant()

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self._num.constant_value()

    def is_polynomial(self) -> bool:
        return self._den == _ONE

    def uses(self, name: str) -> bool:
        i = VARS.index(name)
        return self._num.uses(i) or self._den.uses(i)

    def variables(self) -> set[str]:
        return self._num.variables() | self._den.variables()

    def chart(self) -> Chart | None:
        """The chart forced by the symbols present, or None if neutral."""
        has_a = self._num.uses(IYP) or self._den.uses(IYP)
        has_b = any(self._num.uses(i) or self._den.uses(i) for i in (IU, IS))
        if has_a and has_b:
            raise ChartError("expression mixes yp with u or s")
        if has_a:
            return Chart.A
        if has_b:
            return Chart.B
        return None

    # -- protocol -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, RatExpr):
            return self._num == other._num and self._den == other._den
        if isinstance(other, (int, mpq)):
            return self == RatExpr.const(other)
        if isinstance(other, LaurentPoly):
            return self == RatExpr.from_poly(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._num, self._den))
        return self._hash

    def __repr__(self) -> str:
        return f"RatExpr({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    def to_text(self) -> str:
        from .printing import format_ratexpr

        return format_ratexpr(self)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> "RatExpr":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self._den == other._den:
            if self._den == _ONE:
                return RatExpr(self._num + other._num, _ONE, canonical=True)
            return RatExpr(self._num + other._num, self._den)
        return RatExpr(self._num * other._den + other._num * self._den, self._den * other._den)

    __radd__ = __add__

    def __neg__(self) -> "RatExpr":
        return RatExpr(-self._num, self._den, canonical=True)

    def __sub__(self, other) -> "RatExpr":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "RatExpr":
        return (-self) + other

    def __mul__(self, other) -> "RatExpr":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return _RZERO
        if other.is_constant():
            return RatExpr(self._num.scale(other._num.constant_value()), self._den, canonical=True)
        if self.is_constant():
            return RatExpr(other._num.scale(self._num.constant_value()), other._den, canonical=True)
        if self._den == _ONE and other._den == _ONE:
            return RatExpr(self._num * other._num, _ONE, canonical=True)
        return RatExpr(self._num * other._num, self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "RatExpr":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        return RatExpr(self._den, self._num)

    def __truediv__(self, other) -> "RatExpr":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("division by zero expression")
        if other.is_constant():
            return RatExpr(self._num.scale(1 / other._num.constant_value()), self._den, canonical=True)
        return RatExpr(self._num * other._den, self._den * other._num)

    def __rtruediv__(self, other) -> "RatExpr":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int) -> "RatExpr":
        if not isinstance(n, int):
            raise TypeError("integer exponent required")
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return _RONE
        if self._den == _ONE and not self._num.uses(IS):
            return RatExpr(self._num**n, _ONE, canonical=True)
        if not self._num.uses(IS):
            # num and den coprime implies their powers are coprime
            return RatExpr(self._num**n, self._den**n, canonical=True)
        return RatExpr(self._num**n, self._den**n)

    def scale(self, c) -> "RatExpr":
        return RatExpr(self._num.scale(c), self._den, canonical=True) if mpq(c) else _RZERO

    # -- calculus ---------------------------------------------------------
    def diff(self, name: str, chart: Chart | None = None) -> "RatExpr":
        """Partial derivative in the given chart (inferred when omitted)."""
        return partial_derivative(self, name, chart)

    def subs(self, images: Mapping[str, "RatExpr"]) -> "RatExpr":
        """Substitute variables by rational expressions."""
        idx = {VARS.index("yp" if k == "y'" else k): _coerce(v) for k, v in images.items()}
        return _eval_poly(self._num, idx) / _eval_poly(self._den, idx)


def _coerce(other):
    if isinstance(other, RatExpr):
        return other
    if isinstance(other, (int, mpq)):
        return RatExpr.const(other)
    if isinstance(other, LaurentPoly):
        return RatExpr.from_poly(other)
    try:
        from fractions import Fraction

        if isinstance(other, Fraction):
            return RatExpr.const(mpq(other.numerator, other.denominator))
    except ImportError:  # pragma: no cover
        pass
    return NotImplemented


_RZERO = RatExpr(_ZERO, _ONE, canonical=True)
_RONE = RatExpr(_ONE, _ONE, canonical=True)


def _eval_poly(p: LaurentPoly, images: Mapping[int, RatExpr]) -> RatExpr:
    if not images:
        return RatExpr.from_poly(p)
    cache: dict[tuple[int, int], RatExpr] = {}
    keep_acc: dict[tuple[int, ...], list] = {}
    # Group terms by the exponents of substituted variables to share powers.
    for m, c in p.items():
        sub_part = tuple(m[i] if i in images else 0 for i in range(NVARS))
        rest = tuple(0 if i in images else m[i] for i in range(NVARS))
        keep_acc.setdefault(sub_part, []).append((rest, c))
    total_num = _ZERO
    total = RatExpr.zero()
    for sub_part, rest_terms in keep_acc.items():
        factor = RatExpr.one()
        for i, e in enumerate(sub_part):
            if e:
                key = (i, e)
                if key not in cache:
                    cache[key] = images[i] ** e
                factor = factor * cache[key]
        rest_poly = LaurentPoly({r: c for r, c in rest_terms})
        if factor == RatExpr.one():
            total_num = total_num + rest_poly
        else:
            total = total + factor * RatExpr.from_poly(rest_poly)
    return total + RatExpr.from_poly(total_num)


# ---------------------------------------------------------------------------
# derivatives

def _chart_for(e: RatExpr, chart: Chart | None) -> Chart:
    found = e.chart()
    if chart is None:
        return found or Chart.A
    if found is not None and found is not chart:
        raise ChartError(f"expression belongs to {found}, not {chart}")
    return chart


def _poly_partial(p: LaurentPoly, i: int, chart: Chart) -> tuple[LaurentPoly, LaurentPoly]:
    """Return (P1, P2) with dp/dv = P1 + P2 * s/(4y^3+u) in chart B."""
    if chart is Chart.A or not p.uses(IS):
        return p.derivative(i), _ZERO
    a, b = p.s_split()
    p1 = a.derivative(i) + b.derivative(i) * _S
    if i == IY:
        p2 = b * LaurentPoly({(0, 2, 0, 0, 0, 0): 6})
    elif i == IU:
        p2 = b.scale(mpq(1, 2))
    else:
        p2 = _ZERO
    return p1, p2


VAR_ALIASES = {"y'": "yp"}


def partial_derivative(e: RatExpr, name: str, chart: Chart | None = None) -> RatExpr:
    """Partial derivative of ``e`` with respect to a coordinate of its chart."""
    name = VAR_ALIASES.get(name, name)
    if name not in VARS:
        raise ValueError(f"unknown variable {name!r}")
    chart = _chart_for(e, chart)
    i = VARS.index(name)
    if i not in COORDS[chart]:
        raise ValueError(f"{name} is not a coordinate of {chart}")
    if e.is_zero:
        return RatExpr.zero()
    n1, n2 = _poly_partial(e.num, i, chart)
    d1 = e.den.derivative(i)
    if n2.is_zero:
        if e.den == _ONE:
            return RatExpr(n1, _ONE)
        return RatExpr(n1 * e.den - e.num * d1, e.den * e.den)
    # dN = n1 + n2*s/S  with S = 4y^3+u
    top = (n1 * S_SQUARED + n2 * _S) * e.den - e.num * S_SQUARED * d1
    return RatExpr(top, S_SQUARED * e.den * e.den)


# ---------------------------------------------------------------------------
# chart conversion for functions

def _u_in_a() -> RatExpr:
    return RatExpr.var("yp") ** 2 - 4 * RatExpr.var("y") ** 3


def to_chart(e: RatExpr, target: Chart) -> RatExpr:
    """Express ``e`` in the target chart (yp <-> s, u <-> yp^2 - 4y^3)."""
    src = e.chart()
    if src is None or src is target:
        return e
    if target is Chart.B:
        return e.subs({"yp": RatExpr.var("s")})
    return e.subs({"s": RatExpr.var("yp"), "u": _u_in_a()})


def var(name: str) -> RatExpr:
    return RatExpr.var(name)


def const(c) -> RatExpr:
    return RatExpr.const(c)
