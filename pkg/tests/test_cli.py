"""Tests for the command line client."""

import json

import pytest
from click.testing import CliRunner

from realhyp.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_help_lists_the_commands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for name in ("verify", "classify", "moduli", "bdf", "export", "serve"):
        assert name in result.output


def test_version_option(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert "realhyp" in result.output


def test_verify_exits_one_while_the_flagged_slots_mismatch(runner):
    result = runner.invoke(main, ["verify"])
    assert result.exit_code == 1
    assert "overall: FAIL" in result.output
    assert "Z2sq-D4-01" in result.output
    assert "fingerprint separation: 78 distinct" in result.output


def test_verify_quiet_prints_nothing(runner):
    result = runner.invoke(main, ["verify", "--quiet"])
    assert result.exit_code == 1
    assert result.output == ""


def test_verify_writes_the_json_report(runner, tmp_path):
    target = tmp_path / "report.json"
    result = runner.invoke(
        main, ["verify", "--format", "json", "--out", str(target)]
    )
    assert result.exit_code == 1
    assert "wrote verification report" in result.output
    report = json.loads(target.read_text(encoding="utf-8"))
    assert report["slot_count"] == 78
    assert report["mismatched_ids"] == ["Z2sq-D4-01", "Z2sq-D4-02"]


def test_verify_parallel_writes_identical_bytes(runner, tmp_path):
    serial = tmp_path / "serial.csv"
    threaded = tmp_path / "parallel.csv"
    assert (
        runner.invoke(
            main, ["verify", "--format", "csv", "--out", str(serial)]
        ).exit_code
        == 1
    )
    assert (
        runner.invoke(
            main,
            ["verify", "--format", "csv", "--out", str(threaded), "--parallel"],
        ).exit_code
        == 1
    )
    assert serial.read_bytes() == threaded.read_bytes()


def test_classify_reports_the_first_slot(runner):
    result = runner.invoke(main, ["classify", "--slot", "Z2-01"])
    assert result.exit_code == 0
    assert "G=Z2" in result.output
    assert "Ghat=Z2xZ2" in result.output
    assert "split=True" in result.output
    assert "computed S(R)=4K" in result.output


def test_classify_reports_the_nonsplit_slot(runner):
    result = runner.invoke(main, ["classify", "--slot", "nonsplit-01"])
    assert result.exit_code == 0
    assert "involutive classes: 0" in result.output
    assert "∅" in result.output


def test_classify_flagged_slot_exits_one_with_the_mismatch(runner):
    result = runner.invoke(main, ["classify", "--slot", "Z2sq-D4-01"])
    assert result.exit_code == 1
    assert "computed T, recorded 2T" in result.output
    assert "most local reading" in result.output


def test_classify_unknown_slot_is_a_usage_error(runner):
    result = runner.invoke(main, ["classify", "--slot", "nope"])
    assert result.exit_code == 2
    assert "unknown slot" in result.output


def test_classify_json_format(runner):
    result = runner.invoke(
        main, ["classify", "--slot", "Z4-08", "--format", "json"]
    )
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["id"] == "Z4-08"
    assert data["computed"] == "3T"


def test_moduli_text_reports_the_sqrt_points(runner):
    result = runner.invoke(main, ["moduli"])
    assert result.exit_code == 0
    assert "sqrt(3)" in result.output
    assert "TwoIsolatedPoints" in result.output
    assert "all verified: True" in result.output


def test_moduli_rejects_a_nonpositive_tolerance(runner):
    for bad in ("-1", "0"):
        result = runner.invoke(main, ["moduli", "--tol", bad])
        assert result.exit_code == 2
        assert "tolerance" in result.output


def test_moduli_json_to_file(runner, tmp_path):
    target = tmp_path / "moduli.json"
    result = runner.invoke(
        main, ["moduli", "--format", "json", "--out", str(target)]
    )
    assert result.exit_code == 0
    data = json.loads(target.read_text(encoding="utf-8"))
    assert len(data["cases"]) == 8
    assert data["all_verified"] is True


def test_bdf_command_validates_all_seven_cases(runner):
    result = runner.invoke(main, ["bdf"])
    assert result.exit_code == 0
    assert "case 6: group=Z3xZ3 order=9" in result.output
    assert "all validated: True" in result.output


def test_export_writes_each_format(runner, tmp_path):
    as_json = tmp_path / "report.json"
    as_csv = tmp_path / "report.csv"
    as_md = tmp_path / "report.md"

    assert runner.invoke(main, ["export", "--out", str(as_json)]).exit_code == 0
    assert json.loads(as_json.read_text(encoding="utf-8"))["slot_count"] == 78

    assert (
        runner.invoke(
            main, ["export", "--format", "csv", "--out", str(as_csv)]
        ).exit_code
        == 0
    )
    lines = as_csv.read_text(encoding="utf-8").strip().split("\n")
    assert len(lines) == 79

    result = runner.invoke(
        main, ["export", "--format", "md", "--out", str(as_md), "--quiet"]
    )
    assert result.exit_code == 0
    assert result.output == ""
    assert as_md.read_text(encoding="utf-8").startswith("# Catalog verification")


def test_export_requires_an_output_path(runner):
    result = runner.invoke(main, ["export"])
    assert result.exit_code == 2
    assert "--out" in result.output


def test_serve_help_shows_the_socket_options(runner):
    result = runner.invoke(main, ["serve", "--help"])
    assert result.exit_code == 0
    assert "--host" in result.output
    assert "--port" in result.output
