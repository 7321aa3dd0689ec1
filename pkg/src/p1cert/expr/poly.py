"""Multivariate Laurent polynomials over Q in the fixed variable universe.

The universe is ``(x, y, yp, alpha, u, s)``.  Negative exponents are allowed
on ``yp``, ``alpha`` and ``u`` only, and ``s`` is reduced with the rule
``s^2 -> 4*y^3 + u`` so that every stored term has s-exponent 0 or 1.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Iterator, Mapping

from gmpy2 import mpq
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring

VARS: tuple[str, ...] = ("x", "y", "yp", "alpha", "u", "s")
NVARS = len(VARS)
IX, IY, IYP, IALPHA, IU, IS = range(NVARS)
LAURENT = frozenset((IYP, IALPHA, IU))
ZERO_EXP: tuple[int, ...] = (0,) * NVARS

# Polynomial ring used for gcd and exact division.
RING, *_GENS = ring(",".join(VARS), QQ, grlex)

Rational = mpq


def Q(value, den=None) -> mpq:
    """Build an exact rational from ints, strings, Fractions or mpq."""
    if den is not None:
        return mpq(value, den)
    if isinstance(value, str):
        return mpq(value)
    return mpq(value)


def unit(i: int, e: int = 1) -> tuple[int, ...]:
    return tuple(e if k == i else 0 for k in range(NVARS))


def grlex_key(m: tuple[int, ...]) -> tuple:
    """Sort key for graded lexicographic order with x > y > yp > alpha > u > s."""
    return (sum(m), m)


def _add_exp(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(i + j for i, j in zip(a, b))


def _s_square_expansion(k: int) -> dict[tuple[int, ...], mpq]:
    """Terms of (4*y^3 + u)^k."""
    out = {}
    for i in range(k + 1):
        out[(0, 3 * i, 0, 0, k - i, 0)] = mpq(comb(k, i) * 4**i)
    return out


class LaurentPoly:
    """Immutable sparse Laurent polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None, *, check: bool = True):
        if not terms:
            self._terms: dict[tuple[int, ...], mpq] = {}
        elif not check:
            self._terms = dict(terms)
        else:
            acc: dict[tuple[int, ...], mpq] = {}
            for m, c in terms.items():
                if len(m) != NVARS:
                    raise ValueError(f"exponent vector {m!r} has wrong length")
                for i, e in enumerate(m):
                    if e < 0 and i not in LAURENT:
                        raise ValueError(f"negative exponent on {VARS[i]}")
                c = mpq(c)
                if not c:
                    continue
                if m[IS] >= 2:
                    k, r = divmod(m[IS], 2)
                    base = m[:IS] + (r,)
                    for mm, cc in _s_square_expansion(k).items():
                        key = _add_exp(base, mm)
                        acc[key] = acc.get(key, 0) + c * cc
                else:
                    acc[m] = acc.get(m, 0) + c
            self._terms = {m: c for m, c in acc.items() if c}
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c) -> "LaurentPoly":
        c = mpq(c)
        return cls({ZERO_EXP: c}, check=False) if c else cls()

    @classmethod
    def var(cls, name: str) -> "LaurentPoly":
        return cls({unit(VARS.index(name)): mpq(1)}, check=False)

    @classmethod
    def monomial(cls, exps: tuple[int, ...], c=1) -> "LaurentPoly":
        return cls({tuple(exps): c})

    # -- basic protocol -----------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], mpq]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, ...], mpq]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, mpq)):
            return self._terms == LaurentPoly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        from .printing import format_poly

        return f"LaurentPoly({format_poly(self)!r})"

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        acc = dict(self._terms)
        for m, c in other._terms.items():
            v = acc.get(m, 0) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return LaurentPoly(acc, check=False)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self._terms.items()}, check=False)

    def __sub__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return LaurentPoly()
        if len(other._terms) == 1 and ZERO_EXP in other._terms:
            c = other._terms[ZERO_EXP]
            return LaurentPoly({m: a * c for m, a in self._terms.items()}, check=False)
        acc: dict[tuple[int, ...], mpq] = {}
        needs_s = False
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _add_exp(m1, m2)
                if m[IS] >= 2:
                    needs_s = True
                acc[m] = acc.get(m, 0) + c1 * c2
        if needs_s:
            return LaurentPoly(acc)
        return LaurentPoly({m: c for m, c in acc.items() if c}, check=False)

    __rmul__ = __mul__

    def scale(self, c) -> "LaurentPoly":
        c = mpq(c)
        if not c:
            return LaurentPoly()
        return LaurentPoly({m: a * c for m, a in self._terms.items()}, check=False)

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int):
            raise TypeError("integer exponent required")
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial LaurentPoly")
            ((m, c),) = self._terms.items()
            return LaurentPoly({tuple(e * n for e in m): mpq(1) / c ** (-n)})
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- structure ------------------------------------------------------
    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ZERO_EXP in self._terms)

    def constant_value(self) -> mpq:
        return self._terms.get(ZERO_EXP, mpq(0))

    def uses(self, i: int) -> bool:
        return any(m[i] for m in self._terms)

    def variables(self) -> set[str]:
        return {VARS[i] for i in range(NVARS) if self.uses(i)}

    def min_exponents(self) -> tuple[int, ...]:
        if not self._terms:
            return ZERO_EXP
        return tuple(min(m[i] for m in self._terms) for i in range(NVARS))

    def max_exponents(self) -> tuple[int, ...]:
        if not self._terms:
            return ZERO_EXP
        return tuple(max(m[i] for m in self._terms) for i in range(NVARS))

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], mpq]]:
        """Terms in decreasing grlex order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[tuple[int, ...], mpq]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._terms, key=grlex_key)
        return m, self._terms[m]

    def shift(self, exps: Iterable[int]) -> "LaurentPoly":
        """Multiply by the monomial with the given exponent vector."""
        exps = tuple(exps)
        return LaurentPoly({_add_exp(m, exps): c for m, c in self._terms.items()})

    def s_split(self) -> tuple["LaurentPoly", "LaurentPoly"]:
        """Return (a, b) with self = a + b*s."""
        a, b = {}, {}
        for m, c in self._terms.items():
            if m[IS]:
                b[m[:IS] + (0,)] = c
            else:
                a[m] = c
        return LaurentPoly(a, check=False), LaurentPoly(b, check=False)

    def coefficient_in(self, i: int) -> dict[int, "LaurentPoly"]:
        """Group terms by the exponent of variable i."""
        groups: dict[int, dict] = {}
        for m, c in self._terms.items():
            e = m[i]
            groups.setdefault(e, {})[m[:i] + (0,) + m[i + 1 :]] = c
        return {e: LaurentPoly(t, check=False) for e, t in groups.items()}

    def derivative(self, i: int) -> "LaurentPoly":
        """Formal partial derivative treating every variable as independent."""
        acc = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1 :]
                acc[mm] = c * e
        return LaurentPoly(acc, check=False)

    # -- sympy bridge -----------------------------------------------------
    def to_ring(self):
        """Return (PolyElement, shift) with self = shift-monomial * element."""
        lo = self.min_exponents()
        shift = tuple(min(e, 0) for e in lo)
        if any(shift):
            d = {tuple(a - b for a, b in zip(m, shift)): c for m, c in self._terms.items()}
        else:
            d = self._terms
        return RING.from_dict(d) if d else RING.zero, shift

    @classmethod
    def from_ring(cls, p, shift: tuple[int, ...] = ZERO_EXP) -> "LaurentPoly":
        if any(shift):
            return cls({tuple(a + b for a, b in zip(m, shift)): mpq(c) for m, c in p.items()})
        return cls({m: mpq(c) for m, c in p.items()})


def _coerce(other):
    if isinstance(other, LaurentPoly):
        return other
    if isinstance(other, (int, mpq)):
        return LaurentPoly.const(other)
    try:
        from fractions import Fraction

        if isinstance(other, Fraction):
            return LaurentPoly.const(mpq(other.numerator, other.denominator))
    except ImportError:  # pragma: no cover
        pass
    return NotImplemented


def poly_var(name: str) -> LaurentPoly:
    return LaurentPoly.var(name)


# The defining relation of the quadratic extension.
S_SQUARED = LaurentPoly({(0, 3, 0, 0, 0, 0): 4, (0, 0, 0, 0, 1, 0): 1})
