from __future__ import annotations

import json

import pytest

from p1cert.certificates import REGISTRY, index_json, write_reports
from p1cert.certificates.report import EXIT_CODES, CertificateReport, worst_status
from p1cert.certificates.witnesses import decode, encode, reverify
from p1cert.certificates import (
    verify_asl2,
    verify_formules,
    verify_galois_trichotomy,
    verify_hypeinv,
    verify_prim,
    verify_prim0,
    verify_transitif,
)
from p1cert.expr.parsing import parse_ratexpr
from p1cert.objects import u_A

EXPECTED = {
    "formules": "verified",
    "prim0": "verified",
    "asl20": "refuted",
    "transitif": "verified",
    "hypeinv": "verified",
    "prim": "verified",
    "asl2": "verified",
    "trichotomy": "verified",
}


def _is_multiple_of_u(text: str) -> bool:
    q = parse_ratexpr(text) / u_A
    return q.is_constant() and not q.is_zero


def test_registry_ids():
    assert list(REGISTRY) == list(EXPECTED)


@pytest.mark.parametrize("cid", list(EXPECTED))
def test_default_status(default_reports, cid):
    assert default_reports[cid].status == EXPECTED[cid]


def test_default_reports_have_schema(default_reports):
    for rep in default_reports.values():
        data = rep.to_json()
        assert {"id", "status", "evidence_kind", "parameters", "witnesses", "checks", "elapsed_ms"} <= set(data)
        assert all({"desc", "pass"} <= set(c) for c in data["checks"])
        assert all(isinstance(w, str) for w in data["witnesses"])


def test_verified_reports_pass_every_check(default_reports):
    for rep in default_reports.values():
        if rep.status == "verified":
            assert rep.all_passed, rep.id


def test_witnesses_reverify_from_json(default_reports):
    for rep in default_reports.values():
        back = CertificateReport.from_json(rep.dumps())
        assert back.witnesses == rep.witnesses
        for w in back.witnesses:
            assert reverify(w), w


def test_asl20_refutation_is_the_riccati_step(default_reports):
    rep = default_reports["asl20"]
    failed = [c.desc for c in rep.checks if not c.passed]
    assert len(failed) == 1 and "Omega0|0" in failed[0]
    kinds = sorted(decode(w)[0] for w in rep.witnesses)
    assert kinds == ["asl2", "asl2", "riccati", "riccati"]


def test_report_json_round_trip(default_reports):
    for rep in default_reports.values():
        again = CertificateReport.from_json(json.loads(rep.dumps()))
        assert again.dumps() == rep.dumps()


# ---------------------------------------------------------------- X0 controls


def test_transitif_x0_control():
    rep = verify_transitif("X0")
    assert rep.status == "refuted"
    kind, field, payload = decode(rep.witnesses[0])
    assert (kind, field) == ("first-integral", "X0") and _is_multiple_of_u(payload[0])


def test_hypeinv_x0_control():
    rep = verify_hypeinv("X0", 3)
    assert rep.status == "refuted"
    _, _, (P, L) = decode(rep.witnesses[0])
    assert _is_multiple_of_u(P) and L == "0"


def test_hypeinv_larger_degree_still_empty():
    assert verify_hypeinv(degP=6).status == "verified"


def test_prim_x0_control():
    rep = verify_prim("X0")
    assert rep.status == "refuted" and rep.witnesses
    assert all(reverify(w) for w in rep.witnesses)


def test_asl2_x0_control_finds_rational_pairs():
    rep = verify_asl2("X0")
    assert rep.status == "refuted" and len(rep.witnesses) == 2


def test_trichotomy_x0_stops_at_first_branch():
    rep = verify_galois_trichotomy("X0")
    assert rep.status == "refuted"
    assert rep.parameters["transitif_status"] == "refuted"
    assert "prim_status" not in rep.parameters
    assert _is_multiple_of_u(decode(rep.witnesses[0])[2][0])


def test_prim0_families_for_low_powers():
    rep = verify_prim0((0, 1, 2))
    assert rep.status == "verified" and len(rep.witnesses) == 6


def test_formules_mutated_constant_refuted():
    assert verify_formules(10, c1=4).status == "refuted"
    assert verify_formules(10).status == "verified"


# ---------------------------------------------------------------- aggregation


def _fake(cid: str, status: str, field: str = "X1") -> CertificateReport:
    rep = CertificateReport(cid, parameters={"field": field})
    rep.check("stub", status == "verified")
    return rep.finish(status)


@pytest.mark.parametrize("bad", ["undetermined", "refuted"])
@pytest.mark.parametrize("branch", ["transitif", "prim", "asl2"])
def test_trichotomy_is_verified_only_if_all_branches_are(branch, bad):
    subs = {b: _fake(b, "verified") for b in ("transitif", "prim", "asl2")}
    subs[branch] = _fake(branch, bad)
    rep = verify_galois_trichotomy(reports=subs)
    assert rep.status == bad


def test_worst_status_order():
    assert worst_status(["verified", "undetermined"]) == "undetermined"
    assert worst_status(["undetermined", "refuted"]) == "refuted"
    assert worst_status([]) == "verified"
    assert EXIT_CODES == {"verified": 0, "refuted": 1, "undetermined": 2}


def test_finish_rejects_verified_with_failed_check():
    rep = CertificateReport("x")
    rep.check("fails", False)
    with pytest.raises(AssertionError):
        rep.finish("verified")


def test_witness_codec():
    w = encode("darboux", "X0", u_A, parse_ratexpr("0"))
    assert decode(w)[0] == "darboux"
    assert reverify(w)
    assert not reverify(encode("darboux", "X1", u_A, parse_ratexpr("0")))


# ---------------------------------------------------------------- determinism


def test_cheap_certificates_are_deterministic():
    for fn in (verify_formules, verify_prim0, verify_transitif):
        assert fn().dumps(timing=False) == fn().dumps(timing=False)


def test_write_reports_layout(tmp_path, default_reports):
    reps = list(default_reports.values())
    paths = write_reports(reps, tmp_path, timing=False)
    assert sorted(p.name for p in paths) == sorted([f"{c}.json" for c in EXPECTED] + ["index.json"])
    index = json.loads((tmp_path / "index.json").read_text())
    assert index == index_json(reps)
    assert index["status"] == "refuted"
