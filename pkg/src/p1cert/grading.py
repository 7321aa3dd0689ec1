"""Sigma-weight grading and the alpha-degeneration linking X1 to X0.

Sigma = x d/dx - 2y d/dy - 3yp d/dyp - alpha d/dalpha.  A monomial
``x^a y^b yp^c alpha^e u^f s^g`` has weight ``a - 2b - 3c - e - 6f - 3g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .exterior import FormMatrix, KForm, VectorField
from .expr.poly import IALPHA, LaurentPoly
from .expr.ratexpr import COORDS, Chart, RatExpr

VAR_WEIGHTS = (1, -2, -3, -1, -6, -3)  # x, y, yp, alpha, u, s
BASIS_WEIGHTS = {
    Chart.A: (1, -2, -3, -1),
    Chart.B: (1, -2, -6, -1),
}


class _Inhomogeneous:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INHOMOGENEOUS"

    def __reduce__(self):
        return (_Inhomogeneous, ())


INHOMOGENEOUS = _Inhomogeneous()
Weight = Union[int, _Inhomogeneous]

Graded = Union[RatExpr, KForm, VectorField, FormMatrix]


def monomial_weight(m: tuple[int, ...]) -> int:
    return sum(w * e for w, e in zip(VAR_WEIGHTS, m))


def _poly_weights(p: LaurentPoly) -> set[int]:
    return {monomial_weight(m) for m, _ in p.items()}


def _ratexpr_weight(e: RatExpr) -> Weight:
    if e.is_zero:
        return 0
    wn, wd = _poly_weights(e.num), _poly_weights(e.den)
    if len(wn) != 1 or len(wd) != 1:
        return INHOMOGENEOUS
    return wn.pop() - wd.pop()


def _combine(weights) -> Weight:
    found = set()
    for w in weights:
        if w is INHOMOGENEOUS:
            return INHOMOGENEOUS
        found.add(w)
    if len(found) > 1:
        return INHOMOGENEOUS
    return found.pop() if found else 0


def sigma_weight(e: Graded) -> Weight:
    """Common Sigma-weight of e, or INHOMOGENEOUS.  The zero object has weight 0."""
    if isinstance(e, RatExpr):
        return _ratexpr_weight(e)
    if isinstance(e, KForm):
        bw = BASIS_WEIGHTS[e.chart]
        return _combine(
            _add_weight(_ratexpr_weight(c), sum(bw[i] for i in idx)) for idx, c in e.terms.items()
        )
    if isinstance(e, VectorField):
        coord = COORDS[e.chart]
        return _combine(
            _add_weight(_ratexpr_weight(c), -VAR_WEIGHTS[coord[k]]) for k, c in e.components.items()
        )
    if isinstance(e, FormMatrix):
        return _combine(sigma_weight(x) for row in e.entries for x in row if not x.is_zero)
    raise TypeError(f"cannot grade {type(e).__name__}")


def _add_weight(w: Weight, shift: int) -> Weight:
    return w if w is INHOMOGENEOUS else w + shift


def entry_weights(m: FormMatrix) -> list[list[Weight]]:
    return [[sigma_weight(x) if not x.is_zero else None for x in row] for row in m.entries]


def _split_poly(p: LaurentPoly, shift: int = 0) -> dict[int, LaurentPoly]:
    groups: dict[int, dict] = {}
    for m, c in p.items():
        groups.setdefault(monomial_weight(m) + shift, {})[m] = c
    return {w: LaurentPoly(t, check=False) for w, t in groups.items()}


def homogeneous_parts(e: Graded) -> dict[int, Graded]:
    """Split e into Sigma-homogeneous components keyed by weight."""
    if isinstance(e, RatExpr):
        if e.is_zero:
            return {}
        wd = _poly_weights(e.den)
        if len(wd) != 1:
            raise ValueError("denominator is not Sigma-homogeneous")
        shift = -wd.pop()
        return {w: RatExpr(p, e.den) for w, p in sorted(_split_poly(e.num, shift).items())}
    if isinstance(e, KForm):
        bw = BASIS_WEIGHTS[e.chart]
        acc: dict[int, dict] = {}
        for idx, c in e.terms.items():
            for w, part in homogeneous_parts(c).items():
                acc.setdefault(w + sum(bw[i] for i in idx), {})[idx] = part
        return {w: KForm(e.chart, e.degree, t) for w, t in sorted(acc.items())}
    if isinstance(e, VectorField):
        coord = COORDS[e.chart]
        acc = {}
        for k, c in e.components.items():
            for w, part in homogeneous_parts(c).items():
                acc.setdefault(w - VAR_WEIGHTS[coord[k]], {})[k] = part
        return {w: VectorField(e.chart, t) for w, t in sorted(acc.items())}
    raise TypeError(f"cannot grade {type(e).__name__}")


# ---------------------------------------------------------------------------
# alpha prolongation


def _pi_poly(p: LaurentPoly) -> LaurentPoly:
    """pi_alpha^* on a polynomial: each monomial m picks up alpha^{w(m)}."""
    out = {}
    for m, c in p.items():
        if m[IALPHA]:
            raise ValueError("prolong_alpha expects an alpha-free input")
        w = monomial_weight(m)
        out[m[:IALPHA] + (w,) + m[IALPHA + 1 :]] = c
    return LaurentPoly(out, check=False)


def _alpha_val(e: RatExpr) -> int:
    """alpha-adic valuation; canonical denominators carry no alpha monomial."""
    lo = min(m[IALPHA] for m, _ in e.num.items())
    lo_d = min(m[IALPHA] for m, _ in e.den.items())
    return lo - lo_d


def _alpha_power(k: int) -> RatExpr:
    return RatExpr.var("alpha") ** k


def pullback_alpha(e: Graded) -> Graded:
    """pi_alpha^* without normalization (weight 0 on homogeneous pieces)."""
    if isinstance(e, RatExpr):
        if e.is_zero:
            return e
        return RatExpr(_pi_poly(e.num), _pi_poly(e.den))
    if isinstance(e, KForm):
        bw = BASIS_WEIGHTS[e.chart]
        terms = {}
        for idx, c in e.terms.items():
            if 3 in idx:
                raise ValueError("prolong_alpha expects a form without dalpha")
            terms[idx] = pullback_alpha(c) * _alpha_power(sum(bw[i] for i in idx))
        return KForm(e.chart, e.degree, terms)
    if isinstance(e, VectorField):
        coord = COORDS[e.chart]
        comps = {}
        for k, c in e.components.items():
            if k == 3:
                raise ValueError("prolong_alpha expects a field without d/dalpha")
            comps[k] = pullback_alpha(c) * _alpha_power(-VAR_WEIGHTS[coord[k]])
        return VectorField(e.chart, comps)
    if isinstance(e, FormMatrix):
        return e.map(pullback_alpha)
    raise TypeError(f"cannot prolong {type(e).__name__}")


def _coefficients(e: Graded) -> list[RatExpr]:
    if isinstance(e, RatExpr):
        return [e] if not e.is_zero else []
    if isinstance(e, KForm):
        return list(e.terms.values())
    if isinstance(e, VectorField):
        return list(e.components.values())
    if isinstance(e, FormMatrix):
        return [c for row in e.entries for x in row for c in x.terms.values()]
    raise TypeError(f"unsupported {type(e).__name__}")


def min_alpha_power(e: Graded) -> int:
    cs = _coefficients(e)
    return min((_alpha_val(c) for c in cs), default=0)


def _scale(e: Graded, f: RatExpr) -> Graded:
    if isinstance(e, RatExpr):
        return e * f
    return e.scale(f)


def prolong_alpha(e: Graded, normalize: bool = True) -> Graded:
    """Prolong to C^3 x C_alpha and divide by the minimal alpha power."""
    out = pullback_alpha(e)
    if not normalize:
        return out
    k = min_alpha_power(out)
    return _scale(out, _alpha_power(-k)) if k else out


# ---------------------------------------------------------------------------
# alpha expansion


def _poly_alpha_parts(e: RatExpr) -> dict[int, RatExpr]:
    if e.is_zero:
        return {}
    if e.den.uses(IALPHA):
        raise ValueError("alpha appears in a denominator; the expansion is not finite")
    groups: dict[int, dict] = {}
    for m, c in e.num.items():
        groups.setdefault(m[IALPHA], {})[m[:IALPHA] + (0,) + m[IALPHA + 1 :]] = c
    return {k: RatExpr(LaurentPoly(t, check=False), e.den) for k, t in groups.items()}


def alpha_expansion(e: Graded) -> dict[int, Graded]:
    """Map k -> coefficient of alpha^k (finite Laurent expansion)."""
    if isinstance(e, RatExpr):
        return dict(sorted(_poly_alpha_parts(e).items()))
    if isinstance(e, KForm):
        acc: dict[int, dict] = {}
        for idx, c in e.terms.items():
            for k, part in _poly_alpha_parts(c).items():
                acc.setdefault(k, {})[idx] = part
        return {k: KForm(e.chart, e.degree, t) for k, t in sorted(acc.items())}
    if isinstance(e, VectorField):
        acc = {}
        for j, c in e.components.items():
            for k, part in _poly_alpha_parts(c).items():
                acc.setdefault(k, {})[j] = part
        return {k: VectorField(e.chart, t) for k, t in sorted(acc.items())}
    if isinstance(e, FormMatrix):
        keys: set[int] = set()
        per = [[alpha_expansion(x) for x in row] for row in e.entries]
        for row in per:
            for d in row:
                keys |= set(d)
        out = {}
        for k in sorted(keys):
            out[k] = FormMatrix(
                [
                    [d.get(k, KForm(e.chart, x.degree)) for d, x in zip(prow, row)]
                    for prow, row in zip(per, e.entries)
                ],
                e.chart,
            )
        return out
    raise TypeError(f"cannot expand {type(e).__name__}")


def _zero_like(e: Graded) -> Graded:
    if isinstance(e, RatExpr):
        return RatExpr.zero()
    if isinstance(e, KForm):
        return KForm(e.chart, e.degree)
    if isinstance(e, VectorField):
        return VectorField(e.chart, {})
    if isinstance(e, FormMatrix):
        return FormMatrix.zero(e.rows, e.cols, e.degree, e.chart)
    raise TypeError(f"unsupported {type(e).__name__}")


def alpha_coefficient(e: Graded, k: int) -> Graded:
    """Exact coefficient of alpha^k; zero outside the support."""
    return alpha_expansion(e).get(k, _zero_like(e))


@dataclass
class AlphaSeries:
    """Finitely supported Laurent series in alpha with alpha-free coefficients."""

    coefficients: dict[int, Graded] = field(default_factory=dict)

    @classmethod
    def of(cls, e: Graded) -> "AlphaSeries":
        return cls(alpha_expansion(e))

    def __getitem__(self, k: int) -> Graded:
        if k in self.coefficients:
            return self.coefficients[k]
        sample = next(iter(self.coefficients.values()), RatExpr.zero())
        return _zero_like(sample)

    @property
    def support(self) -> list[int]:
        return sorted(self.coefficients)

    def reconstruct(self) -> Graded:
        total = None
        for k, c in sorted(self.coefficients.items()):
            term = _scale(c, _alpha_power(k))
            total = term if total is None else total + term
        return total if total is not None else RatExpr.zero()


__all__ = [
    "VAR_WEIGHTS",
    "BASIS_WEIGHTS",
    "INHOMOGENEOUS",
    "Weight",
    "AlphaSeries",
    "monomial_weight",
    "sigma_weight",
    "entry_weights",
    "homogeneous_parts",
    "pullback_alpha",
    "prolong_alpha",
    "min_alpha_power",
    "alpha_expansion",
    "alpha_coefficient",
]
