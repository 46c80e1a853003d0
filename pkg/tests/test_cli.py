import json

import pytest
from click.testing import CliRunner

from cli.reports import format_value
from conftest import GOLDEN, SPECS
from main import xstable

EXAMPLE2 = SPECS / "example2_triple.json"


def invoke(*args):
    runner = CliRunner()
    return runner.invoke(xstable, [str(arg) for arg in args], catch_exceptions=False)


def read_report(out):
    return json.loads((out / "report.json").read_text())


def test_format_value():
    assert format_value(-0.0) == "0"
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(True) == "true"
    assert format_value(False) == "false"
    assert format_value("1+5") == "1+5"


def test_lattice_golden(tmp_path):
    result = invoke("lattice", "--model", EXAMPLE2, "--point", "1,0.5,0.3333333333333333", "--out", tmp_path)
    assert result.exit_code == 0
    assert (tmp_path / "lattice.csv").read_text() == (GOLDEN / "lattice_example2.csv").read_text()
    report = read_report(tmp_path)
    assert report["status"] == "pass"
    assert report["command"] == "lattice"
    assert len(report["model_digest"]) == 16


def test_diag_golden(tmp_path):
    grid = "points:1,0.5,0.3333333333333333;0.5,2,0.3333333333333333"
    result = invoke("diag", "--model", EXAMPLE2, "--sets", "1;5", "--grid", grid, "--out", tmp_path)
    assert result.exit_code == 0
    assert (tmp_path / "diag.csv").read_text() == (GOLDEN / "diag_example2.csv").read_text()
    assert read_report(tmp_path)["summary"]["ci_ruled_out"] == 0


def test_diag_all_pairs(tmp_path):
    result = invoke("diag", "--model", SPECS / "logistic3_half.json", "--all-pairs", "--out", tmp_path)
    assert result.exit_code == 0
    lines = (tmp_path / "diag.csv").read_text().splitlines()
    assert len(lines) == 7
    assert all(line.endswith("false,false,theorem,grid") for line in lines[1:])


def test_diag_blocks(tmp_path):
    result = invoke("diag", "--model", SPECS / "independence3.json", "--blocks", "1;2;3", "--out", tmp_path)
    assert result.exit_code == 0
    assert (tmp_path / "multiway.csv").exists()
    assert read_report(tmp_path)["summary"]["jointly_independent"] is True


def test_diag_needs_a_selection(tmp_path):
    result = invoke("diag", "--model", EXAMPLE2, "--out", tmp_path)
    assert result.exit_code == 2
    report = read_report(tmp_path)
    assert report["status"] == "error"
    assert "--all-pairs" in report["error"]


@pytest.mark.parametrize("sets", ["1;1", "1+4;4", "1", "1;x"])
def test_diag_rejects_bad_sets(tmp_path, sets):
    result = invoke("diag", "--model", EXAMPLE2, "--sets", sets, "--out", tmp_path)
    assert result.exit_code == 2
    assert read_report(tmp_path)["status"] == "error"


def test_lattice_bad_point(tmp_path):
    result = invoke("lattice", "--model", EXAMPLE2, "--point", "1,0,1", "--out", tmp_path)
    assert result.exit_code == 2
    report = read_report(tmp_path)
    assert report["status"] == "error"
    assert "strictly positive" in report["error"]


def test_missing_and_invalid_specs(tmp_path):
    result = invoke("lattice", "--model", tmp_path / "missing.json", "--point", "1", "--out", tmp_path)
    assert result.exit_code == 2
    broken = tmp_path / "broken.json"
    broken.write_text('{"kind": "logistic",')
    result = invoke("lattice", "--model", broken, "--point", "1", "--out", tmp_path)
    assert result.exit_code == 2
    assert "invalid JSON" in read_report(tmp_path)["error"]


def test_verify_example2(tmp_path):
    result = invoke("verify", "--suite", "example2", "--seed", 1, "--out", tmp_path)
    assert result.exit_code == 0
    rows = (tmp_path / "verify.csv").read_text().splitlines()
    assert rows[0] == "suite,criterion,measured,threshold,passed,detail"
    assert all(row.startswith("example2,") for row in rows[1:])
    assert read_report(tmp_path)["summary"]["example2"]["status"] == "pass"


def test_verify_pairwise(tmp_path):
    result = invoke("verify", "--suite", "pairwise", "--seed", 3, "--out", tmp_path)
    assert result.exit_code == 0


def test_verify_density_skips_non_smooth_models(tmp_path):
    result = invoke("verify", "--suite", "density", "--model", EXAMPLE2, "--seed", 1, "--out", tmp_path)
    assert result.exit_code == 0
    text = (tmp_path / "verify.csv").read_text()
    assert "density,skipped" in text
    assert "non-smooth model" in text
    assert read_report(tmp_path)["summary"]["density"]["status"] == "skipped"


def test_verify_requires_a_seed(tmp_path):
    assert invoke("verify", "--suite", "example2", "--out", tmp_path).exit_code == 2
    assert invoke("verify", "--suite", "nope", "--seed", 1, "--out", tmp_path).exit_code == 2


def test_simulate_is_reproducible(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    for out in (first, second):
        result = invoke("simulate", "--model", SPECS / "example2_pair.json", "-n", 20000, "--seed", 3,
                        "--out", out)
        assert result.exit_code == 0
    assert (first / "sample.csv").read_bytes() == (second / "sample.csv").read_bytes()
    assert (first / "sample.csv").read_text().splitlines()[0] == "1,5"
    assert read_report(first)["summary"]["sample_sha256"] == read_report(second)["summary"]["sample_sha256"]
    check = (first / "ecdf_check.csv").read_text().splitlines()
    assert check[0] == "probe,ecdf,exp_neg_v,se,within_3se"
    assert len(check) == 11


def test_simulate_refuses_models_without_sampler(tmp_path):
    result = invoke("simulate", "--model", SPECS / "logistic3_half.json", "-n", 10, "--seed", 1, "--out", tmp_path)
    assert result.exit_code == 2
    assert "no sampler" in read_report(tmp_path)["error"]


def test_simulate_sample_size(tmp_path):
    result = invoke("simulate", "--model", SPECS / "example2_pair.json", "-n", 0, "--seed", 1, "--out", tmp_path)
    assert result.exit_code == 2


def test_unexpected_failure_is_reported(tmp_path, monkeypatch):
    def broken_loader(path):
        raise RuntimeError("loader exploded")

    monkeypatch.setattr("cli.commands.load_spec", broken_loader)
    with pytest.raises(RuntimeError):
        invoke("lattice", "--model", EXAMPLE2, "--point", "1,1,1", "--out", tmp_path)
    report = read_report(tmp_path)
    assert report["status"] == "error"
    assert report["error"] == "RuntimeError: loader exploded"
