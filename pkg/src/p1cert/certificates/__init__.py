"""Certificate pipelines, their registry and the batch runner."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Mapping

from .asl2 import verify_asl2
from .asl20 import verify_asl20
from .formules import verify_formules
from .hypeinv import verify_hypeinv
from .prim import verify_prim
from .prim0 import verify_prim0
from .report import EXIT_CODES, CertificateReport, worst_status, write_atomic
from .transitif import verify_transitif
from .trichotomy import verify_galois_trichotomy

REGISTRY: dict[str, Callable[..., CertificateReport]] = {
    "formules": verify_formules,
    "prim0": verify_prim0,
    "asl20": verify_asl20,
    "transitif": verify_transitif,
    "hypeinv": verify_hypeinv,
    "prim": verify_prim,
    "asl2": verify_asl2,
    "trichotomy": verify_galois_trichotomy,
}


def run_certificate(cid: str, **kwargs) -> CertificateReport:
    if cid not in REGISTRY:
        raise KeyError(f"unknown certificate {cid!r}; known: {', '.join(REGISTRY)}")
    return REGISTRY[cid](**kwargs)


def run_all(
    out_dir: Path | str | None = None,
    *,
    overrides: Mapping[str, Mapping] | None = None,
    timing: bool = True,
) -> list[CertificateReport]:
    """Run every registered certificate in order; write ``<id>.json`` and ``index.json`` if ``out_dir`` is given.

    The trichotomy reuses the branch reports computed earlier in the same run.
    """
    overrides = dict(overrides or {})
    reports: dict[str, CertificateReport] = {}
    for cid, fn in REGISTRY.items():
        kw = dict(overrides.get(cid, {}))
        if cid == "trichotomy":
            kw.setdefault("reports", reports)
        reports[cid] = fn(**kw)
    out = list(reports.values())
    if out_dir is not None:
        write_reports(out, Path(out_dir), timing=timing)
    return out


def index_json(reports: list[CertificateReport]) -> dict:
    return {
        "status": worst_status([r.status for r in reports]),
        "certificates": [
            {"id": r.id, "status": r.status, "file": f"{r.id}.json", "checks": len(r.checks), "witnesses": len(r.witnesses)}
            for r in reports
        ],
    }


def write_reports(reports: list[CertificateReport], out_dir: Path, *, timing: bool = True) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for r in reports:
        p = out_dir / f"{r.id}.json"
        write_atomic(p, r.dumps(timing))
        paths.append(p)
    p = out_dir / "index.json"
    write_atomic(p, json.dumps(index_json(reports), sort_keys=True, indent=2) + "\n")
    paths.append(p)
    return paths


__all__ = [
    "REGISTRY",
    "run_certificate",
    "run_all",
    "write_reports",
    "index_json",
    "CertificateReport",
    "EXIT_CODES",
    "worst_status",
] + [f.__name__ for f in REGISTRY.values()]
