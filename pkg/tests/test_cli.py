from __future__ import annotations

import json

import pytest

from p1cert.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_transport_x0_y_is_empty(capsys, tmp_path):
    code, out, _ = run(capsys, "transport", "--field", "X0", "--rhs", "y", "--out", str(tmp_path))
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "empty"
    assert json.loads((tmp_path / "transport.json").read_text()) == rep


def test_transport_expectation_mismatch_exits_1(capsys):
    code, _, _ = run(capsys, "transport", "--field", "X0", "--rhs", "y", "--expect", "found")
    assert code == 1


def test_transport_custom_ansatz_and_field_expr(capsys):
    code, out, _ = run(
        capsys, "transport", "--field-expr", "x=1, y=yp, yp=6*y^2", "--rhs", "3*(yp^2-4*y^3)/yp^2",
        "--deg", "x=1,y=1,yp=0", "--laurent", "yp=-1",
    )
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "affine"
    assert rep["particular"] == "x + 2*y*yp^-1"


def test_transport_cap_is_undetermined(capsys):
    code, out, _ = run(capsys, "transport", "--field", "X0", "--rhs", "y", "--cap", "10")
    assert code == 2 and json.loads(out)["status"] == "undetermined"


def test_darboux_x1_empty(capsys):
    code, out, _ = run(capsys, "darboux", "--field", "X1", "--degP", "5", "--degL", "1")
    rep = json.loads(out)
    assert code == 0 and rep["witnesses"] == []


def test_darboux_x0_finds_u(capsys):
    code, out, _ = run(capsys, "darboux", "--field", "X0", "--degP", "3", "--expect", "found")
    assert code == 0 and json.loads(out)["witnesses"] == [["y^3 - 1/4*yp^2", "0"]]


def test_first_integral(capsys):
    code, out, _ = run(capsys, "first-integral", "--field", "X0", "--deg", "3")
    assert code == 0 and json.loads(out)["status"] == "found"


def test_riccati_candidate_equation(capsys):
    code, out, _ = run(capsys, "riccati", "--p", "7/(18*u^3)", "--q", "-1")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "empty" and rep["conclusive"]


def test_asl2_ring_ansatz(capsys):
    code, out, _ = run(capsys, "asl2", "--omega0", "Omega0_0", "--ansatz", "ring")
    assert code == 0 and json.loads(out)["status"] == "empty"


def test_gv_check_zero_extension_has_defects(capsys):
    code, out, _ = run(capsys, "gv-check", "--omega0", "Omega0", "--omega1", "0;0;0;0")
    assert code == 1 and json.loads(out)["status"] == "defects"


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "yp^2-4*y^3", "--apply", "X0")
    assert code == 0 and out.strip() == "0"
    code, out, _ = run(capsys, "eval", "dx/\\dy/\\dyp", "--interior", "X1", "--d")
    assert code == 0 and out.strip() == "0"


def test_verify_single_with_override(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "formules", "--set", "n_max=3", "--out", str(tmp_path / "f.json"))
    assert code == 0
    assert json.loads((tmp_path / "f.json").read_text())["parameters"]["n_max"] == 3


def test_verify_x0_control_exit_code(capsys):
    code, _, _ = run(capsys, "verify", "transitif", "--field", "X0", "--format", "text")
    assert code == 1


def test_report_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("P1CERT_REPORT_DIR", str(tmp_path))
    code, _, _ = run(capsys, "verify", "formules")
    assert code == 0 and (tmp_path / "formules.json").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["transport", "--rhs", "y+"],
        ["transport", "--field", "X9", "--rhs", "y"],
        ["darboux", "--degP", "five"],
        ["verify", "nope"],
        ["verify", "formules", "--set", "colour=3"],
        ["transport", "--rhs", "y", "--ansatz", "{\"deg\": {\"q\": 1}}"],
        [],
    ],
)
def test_usage_errors_exit_3(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3 and "error" in err


def test_io_error_exits_3(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, err = run(capsys, "verify", "formules", "--out", str(blocker / "x.json"))
    assert code == 3 and "I/O error" in err


def test_verify_all_writes_reports_and_summary(capsys, tmp_path):
    code, out, _ = run(capsys, "verify-all", "--out", str(tmp_path / "r"), "--figures", str(tmp_path / "fig"))
    index = json.loads(out)
    assert code == 1 and index["status"] == "refuted"
    names = sorted(p.name for p in (tmp_path / "r").iterdir())
    assert len(names) == 9 and "index.json" in names
    tsv = (tmp_path / "fig" / "summary.tsv").read_text().splitlines()
    assert tsv[0].split("\t")[:2] == ["id", "status"] and len(tsv) == 9
