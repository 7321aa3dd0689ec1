"""Extension of a coframe Omega0 to an asl2 pair (Omega0, Omega1).

The unknown Omega1 is a trace-zero 2x2 matrix of 1-forms with

    d Omega0 = Omega1 ^ Omega0,    d Omega1 = Omega1 ^ Omega1.

The first equation is linear and cuts the ansatz down to an affine set
P + sum t_k K_k.  Substituting into the second gives polynomial equations of
degree <= 2 in the t_k, which are reduced by ordered substitution: linear
equations first, then unknowns occurring linearly with a constant
coefficient, then splitting on rational roots and factorizations.  Anything
else stops the search as undetermined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from gmpy2 import mpq
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from ..exterior import FormMatrix, VectorField, chart_convert
from .ansatz import AnsatzSpec
from .gv import asl2_defects
from .linear import SolutionSet, coefficient_rows, combine, flatten, solve_coordinates, solve_linear

DEFAULT_STEP_CAP = 10_000


@dataclass
class Asl2Result:
    """Outcome of an asl2 extension search within one ansatz."""

    status: str  # "empty", "found" or "undetermined"
    witnesses: list[FormMatrix] = field(default_factory=list)
    families: list[dict[str, Any]] = field(default_factory=list)
    linear: SolutionSet | None = None
    reason: str = ""
    steps: int = 0
    equations: list = field(default_factory=list)
    _system: Any = None

    @property
    def is_empty(self) -> bool:
        return self.status == "empty"

    def contains(self, M: FormMatrix) -> bool:
        """True when M lies in the ansatz and satisfies both structure equations."""
        if self.linear is None or self.linear.status != "affine":
            return False
        if asl2_defects(self._system["Omega0"], M) or not M.trace().is_zero:
            return False
        return self.linear.contains(M)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witnesses": [w.to_text() for w in self.witnesses],
            "families": self.families,
            "reason": self.reason,
            "steps": self.steps,
        }


class _Undetermined(Exception):
    pass


class _StepCap(Exception):
    pass


def _matrix_linear(P: FormMatrix, K: FormMatrix) -> FormMatrix:
    return K.d() - P.wedge(K) - K.wedge(P)


def _polynomial_system(P: FormMatrix, kernel: list[FormMatrix]):
    """Equations of d Omega1 = Omega1 ^ Omega1 on P + sum t_k K_k."""
    n = len(kernel)
    names = [f"t{k}" for k in range(n)] or ["t0"]
    R, *gens = ring(",".join(names), QQ)
    cols = [flatten(P.d() - P.wedge(P))]
    monos = [R.one]
    for k, K in enumerate(kernel):
        cols.append(flatten(_matrix_linear(P, K)))
        monos.append(gens[k])
    for k in range(n):
        for l in range(k, n):
            W = kernel[k].wedge(kernel[l])
            if l != k:
                W = W + kernel[l].wedge(kernel[k])
            cols.append(flatten(-W))
            monos.append(gens[k] * gens[l])
    rows = coefficient_rows(cols)
    eqs = []
    seen = set()
    for key in sorted(rows, key=repr):
        p = R.zero
        for col, c in rows[key].items():
            p += monos[col] * QQ(c)
        if p and p not in seen:
            seen.add(p)
            eqs.append(p)
    return R, gens[:n], eqs


def _strip(p, nonzero):
    """Divide out factors known to be nonzero on the current branch."""
    changed = True
    while changed and not p.is_ground:
        changed = False
        for nz in nonzero:
            if nz.is_ground:
                continue
            q, r = p.div([nz])
            if not r:
                p = q[0]
                changed = True
    return p


def _tdeg(p) -> int:
    return max((sum(m) for m in p.monoms()), default=0)


_FACTOR_CACHE: dict = {}


def _factors(p):
    hit = _FACTOR_CACHE.get(p)
    if hit is None:
        _, facs = p.factor_list()
        hit = [f.monic() for f, _ in facs if not f.is_ground]
        if len(_FACTOR_CACHE) > 50_000:
            _FACTOR_CACHE.clear()
        _FACTOR_CACHE[p] = hit
    return hit


def _best_split(polys, linear_only: bool, max_terms: int = 8):
    """(index, monic factors) of a cheap reducible equation, if any.

    Short equations are tried first; the first one with a linear factor wins.
    """
    order = sorted(range(len(polys)), key=lambda k: (len(polys[k].terms()), _tdeg(polys[k])))
    fallback = None
    for k in order:
        p = polys[k]
        if linear_only and len(p.terms()) > max_terms:
            break
        facs = _factors(p)
        if not facs or (len(facs) == 1 and facs[0] == p):
            continue
        if any(_tdeg(f) == 1 for f in facs):
            return k, facs
        if not linear_only and fallback is None:
            fallback = (k, facs)
    return fallback


def _best_substitution(polys, n: int):
    """An unknown occurring only in a constant-coefficient linear term.

    Returns (generator index, p / lc) so that p = 0 reads t_j = t_j - p / lc.
    Candidates with the lowest-degree remainder are preferred.
    """
    best = None
    for p in polys:
        terms = p.terms()
        for j in range(n):
            lin = None
            ok = True
            for m, c in terms:
                if m[j] == 0:
                    continue
                if m[j] == 1 and sum(m) == 1:
                    lin = c
                    continue
                ok = False
                break
            if not ok or lin is None:
                continue
            rest_deg = max((sum(m) for m, _ in terms if m[j] == 0), default=0)
            key = (rest_deg, len(terms))
            if best is None or key < best[0]:
                best = (key, j, p * (QQ(1) / lin))
    return None if best is None else (best[1], best[2])


def _solve_system(R, gens, eqs, cap: int):
    """Branches of the polynomial system as substitution maps.

    Returns (solutions, steps, stalled) where each solution maps generator
    indices to polynomials in the remaining free generators, and ``stalled``
    lists the consistent branches the substitution rules could not finish
    (irreducible nonlinear constraints, possibly with irrational roots).
    Branch consistency in that last case is decided with a Groebner basis.
    """
    steps = [0]
    results: list[dict[int, Any]] = []
    stalled: list[list[str]] = []

    def tick():
        steps[0] += 1
        if steps[0] > cap:
            raise _StepCap()

    def substitute(polys, assignment, nonzero, j, value):
        g = gens[j]
        new_assign = {i: v.compose(g, value) for i, v in assignment.items()}
        new_assign[j] = value
        return [p.compose(g, value) for p in polys], new_assign, [n.compose(g, value) for n in nonzero]

    def run(polys, assignment, nonzero):
        tick()
        if any(not n for n in nonzero):
            return
        nonzero = [n.monic() for n in nonzero if not n.is_ground]
        uniq = []
        for p in polys:
            if not p:
                continue
            p = _strip(p, nonzero)
            if p.is_ground:
                return  # nonzero constant: branch inconsistent
            p = p.monic()
            if p not in uniq:
                uniq.append(p)
        polys = uniq
        if not polys:
            results.append(assignment)
            return
        lin = [p for p in polys if max(sum(m) for m in p.monoms()) <= 1]
        if lin:
            p = lin[0]
            j = max(i for i, g in enumerate(gens) if p.degree(g) == 1)
            a = p.coeff(gens[j])
            value = (gens[j] * a - p) * (QQ(1) / QQ(a))
            run(*substitute(polys, assignment, nonzero, j, value))
            return
        # split on linear factors before any substitution that raises degrees
        split = _best_split(polys, linear_only=True)
        if split is not None:
            k, facs = split
            others = polys[:k] + polys[k + 1 :]
            for i, f in enumerate(facs):
                run(others + [f], assignment, nonzero + facs[:i])
            return
        sub = _best_substitution(polys, len(gens))
        if sub is not None:
            j, value = sub
            run(*substitute(polys, assignment, nonzero, j, gens[j] - value))
            return
        split = _best_split(polys, linear_only=False)
        if split is not None:
            k, facs = split
            others = polys[:k] + polys[k + 1 :]
            for i, f in enumerate(facs):
                run(others + [f], assignment, nonzero + facs[:i])
            return
        if _inconsistent(polys, nonzero, gens):
            return
        stalled.append([str(p) for p in polys])

    run(list(eqs), {}, [])
    return results, steps[0], stalled


def _inconsistent(polys, nonzero, gens) -> bool:
    """Does the branch {polys = 0, nonzero != 0} have no point over C?"""
    import sympy as sp

    used = sorted({str(g) for p in polys + nonzero for g in gens if p.degree(g) > 0})
    syms = sp.symbols(used)
    z = sp.Symbol("_z")
    exprs = [sp.sympify(str(p).replace("**", "^").replace("^", "**")) for p in polys]
    # Rabinowitsch trick for the inequations
    if nonzero:
        prod = sp.Integer(1)
        for n in nonzero:
            prod *= sp.sympify(str(n))
        exprs.append(z * prod - 1)
        syms = list(syms) + [z]
    G = sp.groebner(exprs, *syms, order="grevlex", domain="QQ")
    return list(G.exprs) == [1]


def asl2_extend(
    Omega0: FormMatrix,
    ansatz: AnsatzSpec,
    *,
    field_: VectorField | None = None,
    step_cap: int = DEFAULT_STEP_CAP,
    cap: int = 20000,
) -> Asl2Result:
    """All trace-zero Omega1 in the ansatz forming an asl2 pair with Omega0."""
    if ansatz.kind != "matform":
        raise ValueError("asl2_extend expects a matform ansatz")
    if Omega0.chart is not ansatz.chart:
        Omega0 = Omega0.map(lambda f: chart_convert(f, ansatz.chart))
    if field_ is not None:
        X = field_ if field_.chart is ansatz.chart else chart_convert(field_, ansatz.chart)
        for i in range(Omega0.rows):
            if not Omega0[i, 0](X).is_zero:
                raise ValueError("Omega0 does not annihilate the field")
    atoms = ansatz.atoms()
    lin = solve_linear(lambda M: M.wedge(Omega0), atoms, Omega0.d(), ansatz=ansatz, independent=ansatz.independent, cap=cap)
    system = {"Omega0": Omega0}
    if lin.status != "affine":
        return Asl2Result(
            "empty" if lin.status == "empty" else "undetermined",
            linear=lin,
            reason="d Omega0 = Omega1 ^ Omega0 has no solution in the ansatz" if lin.status == "empty" else lin.reason,
            _system=system,
        )
    P, kernel = lin.particular, lin.kernel
    R, gens, eqs = _polynomial_system(P, kernel)
    try:
        branches, steps, stalled = _solve_system(R, gens, eqs, step_cap)
    except _StepCap:
        return Asl2Result("undetermined", linear=lin, reason=f"elimination exceeded {step_cap} steps", steps=step_cap, _system=system)
    except _Undetermined as exc:
        return Asl2Result("undetermined", linear=lin, reason=str(exc), _system=system)
    witnesses: list[FormMatrix] = []
    families = []
    for assignment in branches:
        free = [j for j in range(len(gens)) if j not in assignment]
        for p in eqs:
            q = p
            for j, v in assignment.items():
                q = q.compose(gens[j], v)
            if q:
                raise AssertionError("asl2 branch failed symbolic re-verification")
        point = {j: mpq(0) for j in free}
        coords = []
        for j in range(len(gens)):
            if j in assignment:
                val = assignment[j]
                for f in free:
                    val = val.compose(gens[f], R(0))
                coords.append(mpq(str(val.LC if val else 0)))
            else:
                coords.append(point[j])
        M = P + combine(coords, kernel) if kernel else P
        if asl2_defects(Omega0, M) or not M.trace().is_zero:
            raise AssertionError("asl2 witness failed re-verification")
        if not any(M == w for w in witnesses):
            witnesses.append(M)
        families.append(
            {
                "free": [str(gens[j]) for j in free],
                "assignment": {str(gens[j]): str(v) for j, v in sorted(assignment.items())},
            }
        )
    if witnesses:
        status, reason = "found", ""
    elif stalled:
        status, reason = "undetermined", f"{len(stalled)} consistent branch(es) with irreducible nonlinear constraints, e.g. " + "; ".join(stalled[0][:3])
    else:
        status, reason = "empty", "structure equations inconsistent on the affine solution set"
    return Asl2Result(status, witnesses, families, lin, reason, steps, [str(e) for e in eqs], system)


__all__ = ["Asl2Result", "asl2_extend", "DEFAULT_STEP_CAP"]
