"""Finite search spaces for unknown functions, 1-forms and trace-zero form matrices."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Mapping

from ..exterior import FormMatrix, KForm
from ..expr.poly import IS, LAURENT, VARS, LaurentPoly, grlex_key
from ..expr.ratexpr import COORDS, Chart, RatExpr
from ..grading import BASIS_WEIGHTS, INHOMOGENEOUS, monomial_weight, sigma_weight

KINDS = ("function", "1-form", "matform")
CHART_VARS = {
    Chart.A: ("x", "y", "yp", "alpha"),
    Chart.B: ("x", "y", "u", "alpha", "s"),
}


class AnsatzError(ValueError):
    """Ill-formed ansatz bounds."""


@dataclass(frozen=True)
class AnsatzSpec:
    """Bounded monomial support for an unknown.

    ``deg`` holds upper exponent bounds and ``laurent`` lower bounds (<= 0,
    only for yp, u, alpha).  Variables absent from ``deg`` are excluded,
    except ``s`` in chart B which defaults to exponents {0, 1}.  ``total``
    bounds the sum of the non-negative exponents.  For ``matform`` the
    ``grading`` pair gives the weights of the two rows of Omega^0, so entry
    (i, j) has weight ``weight + grading[i] - grading[j]``.
    """

    deg: Mapping[str, int] = field(default_factory=dict)
    laurent: Mapping[str, int] = field(default_factory=dict)
    weight: int | None = None
    xdeg: int | None = None
    total: int | None = None
    kind: str = "function"
    chart: Chart = Chart.A
    dalpha: bool = False
    grading: tuple[int, int] | None = None
    den: str | None = None
    den_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "deg", dict(self.deg))
        object.__setattr__(self, "laurent", dict(self.laurent))
        if isinstance(self.chart, str):
            object.__setattr__(self, "chart", Chart(self.chart.replace("CHART_", "")))
        if self.kind not in KINDS:
            raise AnsatzError(f"unknown ansatz kind {self.kind!r}")
        allowed = CHART_VARS[self.chart]
        for v, d in self.deg.items():
            if v not in allowed:
                raise AnsatzError(f"{v} is not a variable of {self.chart}")
            if int(d) < 0:
                raise AnsatzError(f"negative upper bound for {v}")
        for v, lo in self.laurent.items():
            if v not in allowed or VARS.index(v) not in LAURENT:
                raise AnsatzError(f"Laurent bound not allowed for {v}")
            if int(lo) > 0:
                raise AnsatzError(f"Laurent bound for {v} must be <= 0")
        if self.grading is not None:
            object.__setattr__(self, "grading", tuple(self.grading))
        if int(self.den_power) < 0:
            raise AnsatzError("den_power must be >= 0")
        if self.den_power and self.den is None:
            raise AnsatzError("den_power given without den")
        if self.den is not None:
            d = self.denominator()
            if d.is_zero:
                raise AnsatzError("ansatz denominator is zero")
            if self.den_power and self.weight is not None and sigma_weight(d) is INHOMOGENEOUS:
                raise AnsatzError("weighted ansatz needs a homogeneous denominator")

    def denominator(self) -> RatExpr:
        """The denominator D of the rational atoms m / D^j (1 when absent)."""
        if self.den is None:
            return RatExpr.one()
        from ..expr.parsing import parse_ratexpr

        return parse_ratexpr(self.den, self.chart)

    @property
    def independent(self) -> bool:
        """Whether the atoms are linearly independent by construction."""
        return self.den is None or self.den_power == 0

    # -- enumeration ------------------------------------------------------
    def _ranges(self) -> list[range]:
        out = []
        for i, name in enumerate(VARS):
            if name not in CHART_VARS[self.chart]:
                out.append(range(0, 1))
                continue
            if i == IS:
                hi = min(self.deg.get("s", 1), 1)
                out.append(range(0, hi + 1))
                continue
            hi = self.deg.get(name, 0)
            if name == "x" and self.xdeg is not None:
                hi = min(hi, self.xdeg) if "x" in self.deg else self.xdeg
            lo = self.laurent.get(name, 0)
            out.append(range(lo, hi + 1))
        return out

    def monomials(self, weight: int | None = None) -> list[tuple[int, ...]]:
        """Exponent vectors in decreasing grlex order, filtered by weight."""
        out = []
        for m in product(*self._ranges()):
            if self.total is not None and sum(e for e in m if e > 0) > self.total:
                continue
            if weight is not None and monomial_weight(m) != weight:
                continue
            out.append(m)
        out.sort(key=grlex_key, reverse=True)
        return out

    def scalars(self, weight: int | None = None) -> list[RatExpr]:
        """Scalar atoms m / D^j of the given weight, j = 0..den_power."""
        out = []
        D = self.denominator()
        dw = sigma_weight(D) if self.den_power else 0
        for j in range(self.den_power + 1):
            if weight is not None and j and dw is INHOMOGENEOUS:
                continue
            ww = None if weight is None else weight + j * dw
            inv = D ** (-j) if j else None
            for m in self.monomials(ww):
                e = RatExpr(LaurentPoly({m: 1}, check=False), canonical=True)
                out.append(e * inv if inv is not None else e)
        return out

    def atoms(self) -> list:
        """The ansatz basis as RatExpr, KForm or FormMatrix values."""
        if self.kind == "function":
            return self.scalars(self.weight)
        nb = 4 if self.dalpha else 3
        bw = BASIS_WEIGHTS[self.chart]

        def forms(w: int | None) -> list[KForm]:
            res = []
            for b in range(nb):
                ww = None if w is None else w - bw[b]
                for e in self.scalars(ww):
                    res.append(KForm(self.chart, 1, {(b,): e}))
            return res

        if self.kind == "1-form":
            return forms(self.weight)
        g = self.grading or (0, 0)
        w0 = self.weight
        zero = KForm(self.chart, 1)
        atoms = []
        for pos in ("d", "12", "21"):
            if pos == "d":
                ew = w0
            elif pos == "12":
                ew = None if w0 is None else w0 + g[0] - g[1]
            else:
                ew = None if w0 is None else w0 + g[1] - g[0]
            for f in forms(ew):
                if pos == "d":
                    ent = [[f, zero], [zero, -f]]
                elif pos == "12":
                    ent = [[zero, f], [zero, zero]]
                else:
                    ent = [[zero, zero], [f, zero]]
                atoms.append(FormMatrix(ent, self.chart))
        return atoms

    def size(self) -> int:
        return len(self.atoms())

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "deg": dict(sorted(self.deg.items())),
            "laurent": dict(sorted(self.laurent.items())),
        }
        for key in ("weight", "xdeg", "total"):
            val = getattr(self, key)
            if val is not None:
                d[key] = val
        d["kind"] = self.kind
        d["chart"] = str(self.chart)
        if self.dalpha:
            d["dalpha"] = True
        if self.grading is not None:
            d["grading"] = list(self.grading)
        if self.den is not None:
            d["den"] = self.den
            d["den_power"] = self.den_power
        return d

    @classmethod
    def from_json(cls, data: Mapping[str, Any] | str) -> "AnsatzSpec":
        if isinstance(data, str):
            data = json.loads(data)
        known = {"deg", "laurent", "weight", "xdeg", "total", "kind", "chart", "dalpha", "grading", "den", "den_power"}
        extra = set(data) - known
        if extra:
            raise AnsatzError(f"unknown ansatz keys {sorted(extra)}")
        return cls(
            deg={k: int(v) for k, v in data.get("deg", {}).items()},
            laurent={k: int(v) for k, v in data.get("laurent", {}).items()},
            weight=data.get("weight"),
            xdeg=data.get("xdeg"),
            total=data.get("total"),
            kind=data.get("kind", "function"),
            chart=data.get("chart", "A"),
            dalpha=bool(data.get("dalpha", False)),
            grading=tuple(data["grading"]) if data.get("grading") is not None else None,
            den=data.get("den"),
            den_power=int(data.get("den_power", 0)),
        )

    def enlarge(self, **changes) -> "AnsatzSpec":
        """A copy with some bounds replaced (used by monotonicity checks)."""
        d = self.to_json()
        d.update(changes)
        return AnsatzSpec.from_json(d)


def poly_ansatz(total: int, chart: Chart = Chart.A, weight: int | None = None, **kw) -> AnsatzSpec:
    """Polynomial ansatz in the chart coordinates with bounded total degree."""
    names = [v for v in CHART_VARS[chart] if v not in ("alpha", "s")]
    return AnsatzSpec(deg={v: total for v in names}, total=total, weight=weight, chart=chart, **kw)


__all__ = ["AnsatzSpec", "AnsatzError", "KINDS", "CHART_VARS", "poly_ansatz", "COORDS"]
