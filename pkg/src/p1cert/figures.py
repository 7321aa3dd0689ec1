"""Optional summary output for ``verify-all --figures``: a TSV table always,
PNG figures when matplotlib is installed (imported lazily)."""

from __future__ import annotations

import csv
import io
import sys
from pathlib import Path

from .certificates.report import CertificateReport, write_atomic

COLUMNS = ("id", "status", "checks", "passed", "witnesses", "elapsed_ms")


def summary_rows(reports: list[CertificateReport]) -> list[dict]:
    return [
        {
            "id": r.id,
            "status": r.status,
            "checks": len(r.checks),
            "passed": sum(c.passed for c in r.checks),
            "witnesses": len(r.witnesses),
            "elapsed_ms": r.elapsed_ms,
        }
        for r in reports
    ]


def summary_tsv(reports: list[CertificateReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, delimiter="\t", lineterminator="\n")
    w.writeheader()
    w.writerows(summary_rows(reports))
    return buf.getvalue()


def write_summary(reports: list[CertificateReport], out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    tsv = out_dir / "summary.tsv"
    write_atomic(tsv, summary_tsv(reports))
    paths = [tsv]
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.stderr.write("matplotlib not installed; wrote summary.tsv only\n")
        return paths
    rows = summary_rows(reports)
    ids = [r["id"] for r in rows]
    colors = {"verified": "tab:green", "refuted": "tab:red", "undetermined": "tab:orange"}
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(11, 4))
    passed = [r["passed"] for r in rows]
    failed = [r["checks"] - r["passed"] for r in rows]
    a1.bar(ids, passed, color=[colors[r["status"]] for r in rows], label="passed")
    a1.bar(ids, failed, bottom=passed, color="black", label="failed")
    a1.set_ylabel("checks")
    a1.legend()
    a2.bar(ids, [max(r["elapsed_ms"], 1) for r in rows], color=[colors[r["status"]] for r in rows])
    a2.set_yscale("log")
    a2.set_ylabel("elapsed ms")
    for a in (a1, a2):
        a.tick_params(axis="x", rotation=45)
    fig.tight_layout()
    png = out_dir / "certificates.png"
    fig.savefig(png, dpi=120)
    plt.close(fig)
    paths.append(png)
    return paths


__all__ = ["summary_rows", "summary_tsv", "write_summary"]
