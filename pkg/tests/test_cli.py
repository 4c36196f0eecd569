import json

import pytest

from sigmak import cli
from sigmak.utils.report import TrajectoryTable


def test_usage(capsys) -> None:
    assert cli.main([]) == 2
    assert cli.main(["-h"]) == 0
    assert "usage: sigmak {classify,integrate,portrait,verify,sweep}" in capsys.readouterr().out
    assert cli.main(["frobnicate"]) == 2
    assert "unknown command 'frobnicate'" in capsys.readouterr().err


def test_classify_round_sphere(capsys) -> None:
    assert cli.main(["classify", "-n", "5", "-k", "2", "--sign", "+", "--h", "0", "--branch", "+"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["case_path"] == "Thm1.I.1"
    assert report["domain"] == "FullSpace"
    assert report["h_star"] == pytest.approx(0.534992, abs=1e-6)


def test_classify_inadmissible(capsys) -> None:
    assert cli.main(["classify", "--h", "0.6", "--branch", "+"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("inadmissible: Thm 1 Case I.3(a) requires h ≤ h*")
    assert "h exceeds h* ≈ 0.534992" in err


def test_classify_state_and_flat_family(capsys) -> None:
    assert cli.main(["classify", "--xi", "0", "--xi_t", "0", "--format", "text"]) == 0
    assert capsys.readouterr().out.startswith("case:      Thm1.I.1")
    assert cli.main(["classify", "--sign", "0", "--family", "sinh", "--t0", "1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["case_path"] == "Thm3.2"
    assert report["closed_form_parameters"] == {"t0": 1.0, "c": 0.0}


@pytest.mark.parametrize(
    "args",
    [
        ["classify"],
        ["classify", "--format", "xml"],
        ["classify", "--xi", "0"],
        ["classify", "--sign", "0"],
        ["classify", "-k", "7"],
    ],
)
def test_classify_usage_errors(args) -> None:
    assert cli.main(args) == 2


def test_unknown_flag_is_a_usage_error() -> None:
    assert cli.main(["classify", "--colour", "blue"]) == 2


def test_integrate_writes_table(capsys, tmp_path) -> None:
    out = tmp_path / "sphere.csv"
    args = ["integrate", "--xi0", "0", "--xit0", "0", "--span", "2", "--xi_bound", "1", "--out", str(out)]
    assert cli.main(args) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("(n=5, k=2, s=+1): h0=0, branch +1")
    assert sum(line.startswith("Escape:") for line in lines) == 2
    assert lines[-1].startswith("drift: ")
    table = TrajectoryTable.read(out)
    assert table.metadata["events"].split().count("Escape") == 2
    assert len(table) > 10


def test_integrate_rejects_null_locus(capsys) -> None:
    assert cli.main(["integrate", "--xit0", "1"]) == 2
    assert capsys.readouterr().err.startswith("error: ")


def test_portrait_writes_files(tmp_path) -> None:
    prefix = tmp_path / "portrait"
    args = ["portrait", "--h_list", "0.1", "-1", "--xi_range", "-2", "2", "--samples", "101", "--out", str(prefix)]
    assert cli.main(args + ["--svg"]) == 0
    names = sorted(path.name for path in tmp_path.iterdir())
    assert len([name for name in names if name.endswith(".csv")]) == 8
    assert "portrait_h1_minus_up.csv" in names
    assert "portrait.svg" in names


def test_verify_with_zero_tolerance_fails(capsys, tmp_path) -> None:
    summary = tmp_path / "summary.json"
    args = ["verify", "--suite", "thresholds", "--tolerance_scale", "0", "--summary_json", str(summary)]
    assert cli.main(args) == 1
    assert capsys.readouterr().out.startswith("thresholds: FAIL (0/")
    data = json.loads(summary.read_text())
    assert data["passed"] is False
    assert data["suites"][0]["suite"] == "thresholds"


def test_verify_thresholds_passes(capsys) -> None:
    assert cli.main(["verify", "--suite", "thresholds"]) == 0
    assert capsys.readouterr().out.startswith("thresholds: PASS")
    assert cli.main(["verify", "--suite", "nope"]) == 2


def test_json_config(capsys, tmp_path) -> None:
    config = tmp_path / "classify.json"
    config.write_text(json.dumps({"n": 3, "k": 2, "sign": "-", "h": 3.0, "branch": "+", "xi_tt_sign": "+"}))
    assert cli.main(["classify", str(config)]) == 0
    assert json.loads(capsys.readouterr().out)["case_path"] == "Thm2.I.3f"
