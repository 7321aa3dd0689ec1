"""Aggregate verdict: the three branches of the Galois groupoid trichotomy are excluded."""

from __future__ import annotations

from typing import Mapping

from ..objects import FIELDS, vol
from .asl2 import verify_asl2
from .prim import verify_prim
from .report import CertificateReport, timed, worst_status
from .transitif import verify_transitif

BRANCHES = (
    ("transitif", "first integral", verify_transitif),
    ("prim", "invariant codimension-one foliation", verify_prim),
    ("asl2", "transversally affine structure", verify_asl2),
)
VERDICT = "Gal(P1) = Inv(gamma) certified within bounds"


def verify_galois_trichotomy(
    field: str = "X1",
    *,
    bounds: Mapping[str, Mapping] | None = None,
    reports: Mapping[str, CertificateReport] | None = None,
) -> CertificateReport:
    """Run the three exclusions for ``field`` and aggregate them.

    ``bounds`` maps a branch id to keyword overrides; ``reports`` supplies
    already computed sub-reports (used by the batch runner).  The run stops
    at the first refuted branch.
    """
    bounds = dict(bounds or {})
    reports = dict(reports or {})
    X = FIELDS[field]
    rep = CertificateReport("trichotomy", evidence_kind="both", parameters={"field": field, "bounds": {k: dict(v) for k, v in sorted(bounds.items())}})
    with timed(rep):
        gamma = vol.interior(X)
        rep.check(f"gamma = i_{field} vol is closed", gamma.d().is_zero)
        rep.check(f"i_{field} gamma = 0", gamma.interior(X).is_zero)
        statuses = []
        for bid, name, fn in BRANCHES:
            sub = reports.get(bid)
            if sub is None or sub.parameters.get("field") != field:
                sub = fn(field, **bounds.get(bid, {}))
            statuses.append(sub.status)
            rep.parameters[f"{bid}_status"] = sub.status
            rep.check(f"branch '{name}' ({bid}) is excluded", sub.status == "verified", sub.status)
            if sub.status == "refuted":
                rep.witnesses.extend(sub.witnesses)
                rep.note(f"stopped at branch '{name}': {bid} is refuted for {field}")
                break
        status = worst_status(statuses + (["verified"] if rep.all_passed else ["undetermined"]))
        if status == "verified":
            rep.note(VERDICT)
        rep.finish(status)
    return rep


__all__ = ["verify_galois_trichotomy", "BRANCHES", "VERDICT"]
