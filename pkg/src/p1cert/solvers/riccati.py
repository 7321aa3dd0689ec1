"""Rational solutions of c' = p + r c + q c^2 with Laurent coefficients in u.

For a monomial q the substitution C = q c gives C' = p q + (r + q'/q) C + C^2.
Any rational solution then has the shape C = R - W'/W: the poles away from
u = 0 are simple with residue -1 and are collected in the polynomial W with
W(0) != 0, and R is a Laurent polynomial holding the principal part at 0 and
the polynomial part at infinity.  Both parts are computed by formal
leading-balance recursions, after which W solves the linear equation

    W'' - (r + 2R) W' + (p + r R + R^2 - R') W = 0.

An empty candidate list at either point, or an indicial equation at
infinity with no admissible degree, makes the empty answer conclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, ceil, isqrt

from gmpy2 import mpq

from ..expr.poly import IU, LaurentPoly, NVARS
from ..expr.ratexpr import Chart, RatExpr

Laurent = dict  # exponent -> mpq


def _u_mono(e: int) -> tuple[int, ...]:
    m = [0] * NVARS
    m[IU] = e
    return tuple(m)


def to_laurent(e: RatExpr) -> Laurent:
    """Coefficients of a Laurent polynomial in u."""
    if not isinstance(e, RatExpr):
        e = RatExpr.const(e)
    if not e.is_polynomial():
        raise ValueError(f"{e} is not a Laurent polynomial in u")
    out = {}
    for m, c in e.num.items():
        if any(v for i, v in enumerate(m) if i != IU):
            raise ValueError(f"{e} involves variables other than u")
        out[m[IU]] = mpq(c)
    return out


def from_laurent(d: Laurent) -> RatExpr:
    return RatExpr(LaurentPoly({_u_mono(k): v for k, v in d.items() if v}), canonical=False)


def _add(a: Laurent, b: Laurent, s=1) -> Laurent:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + s * v
    return {k: v for k, v in out.items() if v}


def _mul(a: Laurent, b: Laurent) -> Laurent:
    out: Laurent = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _der(a: Laurent) -> Laurent:
    return {k - 1: k * v for k, v in a.items() if k}


def _residual(c: Laurent, p: Laurent, r: Laurent) -> Laurent:
    """E(c) = c' - p - r c - c^2."""
    out = _add(_der(c), p, -1)
    out = _add(out, _mul(r, c), -1)
    return _add(out, _mul(c, c), -1)


def _rational_roots_quadratic(a, b, c) -> list[mpq]:
    """Nonzero rational roots of a x^2 + b x + c."""
    a, b, c = mpq(a), mpq(b), mpq(c)
    if a == 0:
        if b == 0:
            return []
        x = -c / b
        return [x] if x else []
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    n, d = disc.numerator, disc.denominator
    sn, sd = isqrt(n), isqrt(d)
    if sn * sn != n or sd * sd != d:
        return []
    root = mpq(sn, sd)
    out = sorted({(-b + root) / (2 * a), (-b - root) / (2 * a)})
    return [x for x in out if x]


@dataclass
class LocalAnalysis:
    candidates: list[Laurent]
    complete: bool
    notes: list[str] = field(default_factory=list)


def _local_parts(p: Laurent, r: Laurent, at_zero: bool) -> LocalAnalysis:
    """Principal parts at 0 (exponents < 0) or polynomial parts at infinity (>= 0)."""
    sgn = 1 if at_zero else -1  # dominance: smaller sgn*exponent dominates

    def dom(exps):
        return min(exps, key=lambda e: sgn * e)

    notes: list[str] = []
    complete = True
    vp = dom(p) if p else None
    vr = dom(r) if r else None
    if at_zero:
        lows = [-1]
        if vp is not None:
            lows.append(floor(vp / 2))
        if vr is not None:
            lows.append(vr)
        m_range = list(range(min(lows), 0))
    else:
        highs = [-1]
        if vp is not None:
            highs.append(ceil(vp / 2))
        if vr is not None:
            highs.append(vr)
        m_range = list(range(max(highs), -1, -1))
    cands: list[Laurent] = [{}]
    for m in m_range:
        orders = [2 * m]
        if m != 0:
            orders.append(m - 1)
        if vp is not None:
            orders.append(vp)
        if vr is not None:
            orders.append(vr + m)
        D = dom(orders)
        qa = -1 if 2 * m == D else 0
        qb = (m if m - 1 == D and m != 0 else 0) - r.get(D - m, 0)
        qc = -p.get(D, 0)
        if qa == 0 and qb == 0:
            continue
        for rho in _rational_roots_quadratic(qa, qb, qc):
            series, ok, note = _continue_series(p, r, m, rho, at_zero)
            if note:
                notes.append(note)
            if not ok:
                complete = False
                continue
            if series is not None:
                cands.append(series)
        if qa != 0:
            disc = qb * qb - 4 * qa * qc
            if disc != 0 and not _rational_roots_quadratic(qa, qb, qc):
                notes.append(f"exponent {m}: leading coefficients irrational or absent")
    return LocalAnalysis(cands, complete, notes)


def _continue_series(p, r, m, rho, at_zero):
    sgn = 1 if at_zero else -1
    S = {m: mpq(rho)}
    ks = range(m + 1, 0) if at_zero else range(m - 1, -1, -1)
    vr = (min(r, key=lambda e: sgn * e)) if r else None
    for k in ks:
        orders = [m + k]
        if k != 0:
            orders.append(k - 1)
        if vr is not None:
            orders.append(vr + k)
        D = min(orders, key=lambda e: sgn * e)
        # L_k = k u^{k-1} - r u^k - 2 S u^k
        Lk = _add({k - 1: mpq(k)} if k else {}, _mul(r, {k: mpq(1)}), -1)
        Lk = _add(Lk, _mul(S, {k: mpq(2)}), -1)
        E = _residual(S, p, r)
        lead = Lk.get(D, 0)
        rhs = E.get(D, 0)
        if lead == 0:
            if rhs != 0:
                return None, True, None
            return None, False, f"resonance at exponent {k} after leading term {rho}*u^{m}"
        t = -rhs / lead
        if t:
            S[k] = t
    return S, True, None


def _indicial_degree(A: Laurent, B: Laurent) -> tuple[bool, int | None]:
    """(determined, max N) for polynomial W ~ u^N of W'' - A W' + B W = 0."""
    dA = max(A) if A else None
    dB = max(B) if B else None
    offs = [-2]
    if dA is not None:
        offs.append(dA - 1)
    if dB is not None:
        offs.append(dB)
    delta = max(offs)
    # I(N) = c2 N^2 + c1 N + c0
    c2 = c1 = c0 = mpq(0)
    if delta == -2:
        c2 += 1
        c1 -= 1
    if dA is not None and dA - 1 == delta:
        c1 -= A[dA]
    if dB is not None and dB == delta:
        c0 += B[dB]
    if c2 == 0 and c1 == 0 and c0 == 0:
        return False, None
    roots = []
    if c2 == 0 and c1 == 0:
        return True, None
    cands = _rational_roots_quadratic(c2, c1, c0) if c2 != 0 or c1 != 0 else []
    if c0 == 0:
        cands.append(mpq(0))
    for x in cands:
        if x.denominator == 1 and x >= 0:
            roots.append(int(x))
    return True, max(roots) if roots else None


def _solve_W(A: Laurent, B: Laurent, nmax: int) -> list[Laurent]:
    """Basis of polynomial W, deg <= nmax, with W'' - A W' + B W = 0."""
    from .linear import solve_linear

    Ar, Br = from_laurent(A), from_laurent(B)
    atoms = [RatExpr(LaurentPoly({_u_mono(n): 1}), canonical=True) for n in range(nmax, -1, -1)]

    def op(W: RatExpr) -> RatExpr:
        d1 = W.diff("u", Chart.B)
        return d1.diff("u", Chart.B) - Ar * d1 + Br * W

    sol = solve_linear(op, atoms, RatExpr.zero(), independent=True)
    return [to_laurent(k) for k in sol.kernel]


@dataclass
class RiccatiResult:
    """Rational solutions found, with a flag telling whether "none" is a proof."""

    solutions: list[RatExpr]
    conclusive: bool
    family: bool = False
    reason: str = ""
    candidates: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.solutions

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)

    def __contains__(self, c) -> bool:
        return any(c == s for s in self.solutions)


def riccati_residual(c: RatExpr, p: RatExpr, q: RatExpr, r: RatExpr | None = None) -> RatExpr:
    r = r if r is not None else RatExpr.zero()
    return c.diff("u", Chart.B) - p - r * c - q * c * c


def riccati_rational_solutions(p, q, bound: int, r=None) -> RiccatiResult:
    """Rational c(u) with c' = p + r c + q c^2, numerator/denominator degree <= bound."""
    P = to_laurent(p)
    Qd = to_laurent(q) if q is not None else {}
    Rl = to_laurent(r) if r is not None else {}
    pe = from_laurent(P)
    qe = from_laurent(Qd)
    re_ = from_laurent(Rl)
    if not Qd:
        return _linear_case(P, Rl, bound, pe, re_)
    if len(Qd) != 1:
        raise ValueError("q must be zero or a monomial in u")
    (j, q0), = Qd.items()
    # C = q c  ->  C' = p q + (r + j/u) C + C^2
    pp = _mul(P, Qd)
    rr = _add(Rl, {-1: mpq(j)} if j else {})
    at0 = _local_parts(pp, rr, True)
    atinf = _local_parts(pp, rr, False)
    notes = at0.notes + atinf.notes
    complete = at0.complete and atinf.complete
    solutions: list[RatExpr] = []
    family = False
    cand_texts = []
    determined_all = True
    for c0 in at0.candidates:
        for ci in atinf.candidates:
            R = _add(c0, ci)
            cand_texts.append(from_laurent(R).to_text())
            A = _add(rr, {k: 2 * v for k, v in R.items()})
            Bc = _add(_add(pp, _mul(rr, R)), _mul(R, R))
            Bc = _add(Bc, _der(R), -1)
            det, nm = _indicial_degree(A, Bc)
            if not det:
                determined_all = False
                nmax = bound
            elif nm is None:
                continue
            elif nm > bound:
                determined_all = False
                nmax = bound
            else:
                nmax = nm
            basis = _solve_W(A, Bc, nmax)
            if len(basis) >= 2:
                family = True
            for W in basis:
                C = _add(R, {}, 1)
                Cexpr = from_laurent(C) - from_laurent(_der(W)) / from_laurent(W)
                c = Cexpr / qe
                if riccati_residual(c, pe, qe, re_) != 0:
                    raise AssertionError("Riccati solution failed re-verification")
                if not any(c == s for s in solutions):
                    solutions.append(c)
    conclusive = complete and determined_all
    reason = ""
    if not solutions:
        if len(at0.candidates) == 1 and not _consistent_regular(pp, rr, True):
            reason = "no admissible leading balance at u = 0"
        elif len(atinf.candidates) == 1 and not _consistent_regular(pp, rr, False):
            reason = "no admissible leading balance at infinity"
        else:
            reason = "no solution of the linearized equation within the degree bound"
    solutions.sort(key=lambda e: e.to_text())
    return RiccatiResult(solutions, conclusive, family, reason, cand_texts, notes)


def _consistent_regular(p: Laurent, r: Laurent, at_zero: bool) -> bool:
    """Can a solution without principal (or polynomial) part exist at this point?"""
    if at_zero:
        # c regular at 0: c' - c^2 - r c regular-ish; p must not have a pole beyond r c
        vp = min(p) if p else 0
        vr = min(r) if r else 0
        return vp >= min(0, vr) - 1 if r else vp >= 0
    dp = max(p) if p else -1
    dr = max(r) if r else -1
    return dp <= max(-1, dr - 1) if r else dp <= -2 or not p


def _linear_case(P: Laurent, Rl: Laurent, bound: int, pe: RatExpr, re_: RatExpr) -> RiccatiResult:
    """c' = p + r c: rational solutions have poles only at 0, so c is Laurent in u."""
    from .linear import solve_linear

    lo = -(bound + max(0, -min(P, default=0)) + 1)
    hi = bound + max(0, max(P, default=0)) + 1
    atoms = [RatExpr(LaurentPoly({_u_mono(n): 1}), canonical=True) for n in range(hi, lo - 1, -1)]
    sol = solve_linear(lambda c: c.diff("u", Chart.B) - re_ * c, atoms, pe, independent=True)
    if sol.status != "affine":
        return RiccatiResult([], False, reason="no Laurent solution in the searched range")
    sols = [sol.particular] if not sol.kernel else []
    if sol.kernel:
        sols = [sol.particular + k if not sol.particular.is_zero else k for k in sol.kernel]
    for c in sols:
        if riccati_residual(c, pe, RatExpr.zero(), re_) != 0:
            raise AssertionError("linear solution failed re-verification")
    return RiccatiResult(sols, False, family=bool(sol.kernel), reason="linear equation: affine family" if sol.kernel else "")


__all__ = ["RiccatiResult", "riccati_rational_solutions", "riccati_residual", "to_laurent", "from_laurent"]
