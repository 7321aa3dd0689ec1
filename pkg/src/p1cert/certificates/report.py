"""Certificate reports: status, checks, serialized witnesses and JSON output."""

from __future__ import annotations

import json
import os
import tempfile
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

STATUSES = ("verified", "refuted", "undetermined")
EVIDENCE = ("bounded-search", "structural-argument", "both")
EXIT_CODES = {"verified": 0, "refuted": 1, "undetermined": 2}


@dataclass
class Check:
    desc: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict[str, Any]:
        d: dict[str, Any] = {"desc": self.desc, "pass": bool(self.passed)}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class CertificateReport:
    """Outcome of one certificate pipeline; ``verified`` requires every check to pass."""

    id: str
    status: str = "undetermined"
    evidence_kind: str = "bounded-search"
    parameters: dict[str, Any] = field(default_factory=dict)
    witnesses: list[str] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    elapsed_ms: int = 0

    def check(self, desc: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(desc, bool(passed), detail))
        return bool(passed)

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def finish(self, status: str) -> "CertificateReport":
        if status not in STATUSES:
            raise ValueError(status)
        if status == "verified" and not self.all_passed:
            raise AssertionError(f"{self.id}: verified status with failing checks")
        self.status = status
        return self

    def to_json(self, timing: bool = True) -> dict[str, Any]:
        d = {
            "id": self.id,
            "status": self.status,
            "evidence_kind": self.evidence_kind,
            "parameters": self.parameters,
            "witnesses": list(self.witnesses),
            "checks": [c.to_json() for c in self.checks],
            "notes": list(self.notes),
        }
        if timing:
            d["elapsed_ms"] = int(self.elapsed_ms)
        return d

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"[{self.status}] {self.id} ({self.evidence_kind}, {self.elapsed_ms} ms)"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(f"  {mark} {c.desc}" + (f": {c.detail}" if c.detail else ""))
        for w in self.witnesses:
            lines.append(f"  witness {w}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)

    @classmethod
    def from_json(cls, data: dict[str, Any] | str) -> "CertificateReport":
        if isinstance(data, str):
            data = json.loads(data)
        rep = cls(
            id=data["id"],
            status=data["status"],
            evidence_kind=data.get("evidence_kind", "bounded-search"),
            parameters=data.get("parameters", {}),
            witnesses=list(data.get("witnesses", [])),
            checks=[Check(c["desc"], c["pass"], c.get("detail", "")) for c in data.get("checks", [])],
            notes=list(data.get("notes", [])),
            elapsed_ms=int(data.get("elapsed_ms", 0)),
        )
        return rep


@contextmanager
def timed(report: CertificateReport) -> Iterator[CertificateReport]:
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.elapsed_ms = int((time.perf_counter() - t0) * 1000)


def write_atomic(path: Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def worst_status(statuses) -> str:
    """Aggregate: refuted beats undetermined beats verified."""
    statuses = list(statuses)
    if "refuted" in statuses:
        return "refuted"
    if "undetermined" in statuses:
        return "undetermined"
    return "verified"


__all__ = ["Check", "CertificateReport", "timed", "write_atomic", "worst_status", "STATUSES", "EXIT_CODES"]
