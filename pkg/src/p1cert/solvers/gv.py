"""Structure equations of Godbillon-Vey sequences, checked order by order.

A sequence is a family of 1-forms omega[i, alpha] for i in 1..p and multi-indices
alpha in N^p.  Up to order q the equations

    d omega_i^alpha = sum_j omega_j^0 ^ omega_i^(alpha + e_j)
                      + sum_{j, |beta| >= 1} C(alpha, beta) omega_j^beta ^ omega_i^(alpha - beta + e_j)

are evaluated for |alpha| <= q - 1, with C(alpha, beta) the product of the
binomials alpha_k choose beta_k (zero unless beta <= alpha componentwise).
Entries not supplied are zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Mapping

from ..exterior import FormMatrix, KForm

Index = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class Defect:
    """A nonzero left-minus-right side of one structure equation."""

    i: int
    alpha: tuple[int, ...]
    form: KForm

    def to_json(self) -> dict:
        return {"i": self.i, "alpha": list(self.alpha), "defect": self.form.to_text()}


def multi_indices(p: int, order: int) -> list[tuple[int, ...]]:
    """All alpha in N^p with |alpha| <= order, by degree then lexicographically."""
    out = [a for a in product(range(order + 1), repeat=p) if sum(a) <= order]
    out.sort(key=lambda a: (sum(a), tuple(-v for v in a)))
    return out


def _binom(alpha, beta) -> int:
    out = 1
    for a, b in zip(alpha, beta):
        if b > a:
            return 0
        out *= comb(a, b)
    return out


def gv_check(omega: Mapping[Index, KForm], codim: int = 2, order: int = 1) -> list[Defect]:
    """Nonzero defects of the structure equations for |alpha| <= order - 1."""
    if codim < 1:
        raise ValueError("codimension must be positive")
    items = {(int(i), tuple(a)): f for (i, a), f in omega.items()}
    if not items:
        return []
    chart = next(iter(items.values())).chart
    zero = KForm(chart, 1)
    for (i, a), f in items.items():
        if not 1 <= i <= codim or len(a) != codim or min(a, default=0) < 0:
            raise ValueError(f"bad index {(i, a)}")
        if f.degree != 1:
            raise ValueError("entries must be 1-forms")

    def w(i: int, a: tuple[int, ...]) -> KForm:
        return items.get((i, a), zero)

    def unit(j: int) -> tuple[int, ...]:
        return tuple(1 if k == j else 0 for k in range(codim))

    defects = []
    for alpha in multi_indices(codim, order - 1):
        for i in range(1, codim + 1):
            rhs = KForm(chart, 2)
            for j in range(codim):
                ej = unit(j)
                up = tuple(a + e for a, e in zip(alpha, ej))
                rhs = rhs + w(j + 1, (0,) * codim).wedge(w(i, up))
                for beta in multi_indices(codim, sum(alpha)):
                    if sum(beta) == 0:
                        continue
                    c = _binom(alpha, beta)
                    if not c:
                        continue
                    rest = tuple(a - b + e for a, b, e in zip(alpha, beta, ej))
                    rhs = rhs + w(j + 1, beta).wedge(w(i, rest)).scale(c)
            diff = w(i, alpha).d() - rhs
            if not diff.is_zero:
                defects.append(Defect(i, alpha, diff))
    return defects


def asl2_family(Omega0: FormMatrix, Omega1: FormMatrix) -> dict[Index, KForm]:
    """The order-one sequence of an asl2 pair: omega_i^0 = Omega0_i, omega_i^(e_j) = -Omega1_ij."""
    out: dict[Index, KForm] = {}
    for i in range(2):
        out[(i + 1, (0, 0))] = Omega0[i, 0]
        for j in range(2):
            e = (1, 0) if j == 0 else (0, 1)
            out[(i + 1, e)] = -Omega1[i, j]
    return out


def asl2_defects(Omega0: FormMatrix, Omega1: FormMatrix) -> list[tuple[tuple[int, int], KForm]]:
    """Entries of dOmega0 - Omega1^Omega0 and dOmega1 - Omega1^Omega1 that do not vanish."""
    out = []
    e0 = Omega0.d() - Omega1.wedge(Omega0)
    for i in range(e0.rows):
        if not e0[i, 0].is_zero:
            out.append(((0, i), e0[i, 0]))
    e1 = Omega1.d() - Omega1.wedge(Omega1)
    for i in range(2):
        for j in range(2):
            if not e1[i, j].is_zero:
                out.append(((1, 2 * i + j), e1[i, j]))
    return out


__all__ = ["Defect", "gv_check", "multi_indices", "asl2_family", "asl2_defects"]
