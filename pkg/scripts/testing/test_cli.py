#!/usr/bin/env python3
"""
Tests for the command line, suite configuration and report output.
"""

import sys
import os
# Add project root to path
sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))

import argparse
import json
import math

import pandas as pd
import pytest

from src.geometry.curvature_tensors import ParameterPair
from src.main import (
    VerificationSuiteOrchestrator,
    build_config,
    load_config_file,
    main,
    parse_point,
    parse_r,
    parse_rational,
    print_summary,
)
from src.utils.errors import ConfigError
from src.utils.reporting import IDENTITY_COLUMNS, STABILITY_COLUMNS, to_jsonable


@pytest.fixture(autouse=True)
def work_in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def test_rational_parsing():
    assert parse_rational("1/3") == 1.0 / 3.0
    assert parse_rational(" -2 ") == -2.0
    assert parse_r("full") == "full"
    assert parse_r("5/2") == 2.5
    assert parse_point("1/2,0,0,1") == [0.5, 0.0, 0.0, 1.0]
    with pytest.raises(argparse.ArgumentTypeError):
        parse_rational("one third")
    with pytest.raises(argparse.ArgumentTypeError):
        parse_point("0,0,0")


def test_flags_override_file_values():
    config = build_config({"resolution": 32, "models": ["gaussian"]}, {"resolution": 48, "models": None})
    assert config.resolution == 48
    assert config.models == ["gaussian"]
    assert build_config().checks == ["pointwise", "integrals", "rigidity"]


def test_config_file_uses_flag_names(tmp_path):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps({"model": "cyl-s3xr", "c": ["1/2", 2], "r": ["full", 3], "res": 32}))
    values = load_config_file(str(path))
    assert values == {"models": ["cyl-s3xr"], "c_values": [0.5, 2.0], "r_values": ["full", 3.0], "resolution": 32}
    config = build_config(values)
    assert config.r_list(1.5) == [None, 3.0]


def test_config_file_errors(tmp_path):
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"models": ["gaussian"]}))
    with pytest.raises(ConfigError):
        load_config_file(str(unknown))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config_file(str(broken))
    with pytest.raises(ConfigError):
        load_config_file(str(tmp_path / "missing.json"))


@pytest.mark.parametrize("values", [
    {"checks": ["bogus"]},
    {"models": ["hyperbolic"]},
    {"identities": ["L9.9"]},
    {"models": ["flat-torus"], "checks": ["integrals"]},
    {"variation_model": "gaussian"},
    {"c_values": [0.0]},
    {"rigidity_r": [1.5]},
    {"alphas": [1.0], "betas": []},
    {"alphas": [0.0], "betas": [0.0]},
    {"resolution": 4},
    {"tolerance": 0.0},
    {"output_format": "xml"},
])
def test_invalid_configurations(values):
    with pytest.raises(ConfigError):
        build_config(flag_values=values)


def test_unknown_identity_exits_with_config_error():
    assert main(["integrals", "--identity", "L9.9"]) == 2


def test_bad_flag_exits_through_argparse():
    with pytest.raises(SystemExit) as excinfo:
        main(["eval", "--model", "sphere4", "--tensor", "R", "--point", "0,0"])
    assert excinfo.value.code == 2


def test_catalog_command(capsys):
    assert main(["catalog"]) == 0
    output = capsys.readouterr().out
    assert "cyl-s2xr2" in output
    assert "conformal-torus" in output


def test_eval_command(capsys):
    assert main(["eval", "--model", "sphere4", "--tensor", "R", "--point", "0,0,0,0"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["value"] == pytest.approx(2.0)


def test_stability_csv(tmp_path):
    out = tmp_path / "stability.csv"
    code = main(["stability", "--alpha", "1", "--beta", "1/3", "--alpha", "-1", "--beta", "0",
                 "--mu0", "3", "--scalar-R", "6", "--format", "csv", "--out", str(out)])
    assert code == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == STABILITY_COLUMNS
    assert frame["inf"].astype(float).tolist() == [2.0, -math.inf]
    assert frame["verdict"].tolist() == ["positive", "nonpositive"]


def test_integrals_report_round_trip(tmp_path):
    out = tmp_path / "report.json"
    code = main(["integrals", "--model", "gaussian", "--identity", "L2.2-4", "--r", "1", "--res", "16",
                 "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["summary"]["pass"] == 1
    assert report["results"][0]["check"] == "identity:L2.2-4"

    assert main(["report", str(out), "--format", "csv"]) == 0
    frame = pd.read_csv(tmp_path / "report.csv")
    assert list(frame.columns) == IDENTITY_COLUMNS
    assert frame["identity"].tolist() == ["L2.2-4"]


def test_failed_check_does_not_stop_the_suite():
    config = build_config(flag_values={"checks": ["integrals"], "models": ["gaussian"],
                                       "identities": ["L2.2-2", "L2.2-4"], "r_values": ["full", 1.0],
                                       "resolution": 16})
    report = VerificationSuiteOrchestrator(config).run_suite()
    errors = [result for result in report.results if result.error]
    assert [result.error for result in errors] == ["NonCompactDomainError"]
    assert errors[0].verdict == "fail"
    assert len(report.results) == 4
    assert report.exit_code == 1


def test_rigidity_on_two_sphere_cylinder_is_vacuous():
    config = build_config(flag_values={"checks": ["rigidity"], "models": ["cyl-s2xr2"], "rigidity_r": [0.75]})
    report = VerificationSuiteOrchestrator(config).run_suite()
    assert report.summary["vacuous"] == 1
    assert report.summary["fail"] == 0
    assert [result.check for result in report.results] == ["rigidity", "rigidity-series"]
    assert any(line.startswith("cyl-s2xr2 (r=0.75)") for line in report.narrative)
    assert report.exit_code == 0


def test_suite_is_deterministic():
    config = build_config(flag_values={"checks": ["stability", "integrals"], "models": ["gaussian"],
                                       "identities": ["L2.2-4"], "resolution": 16})
    first = to_jsonable(VerificationSuiteOrchestrator(config).run_suite())
    second = to_jsonable(VerificationSuiteOrchestrator(config).run_suite())
    first.pop("wall_time")
    second.pop("wall_time")
    assert first == second


def test_json_values():
    assert to_jsonable(float("inf")) == "inf"
    assert to_jsonable({ParameterPair(1.0, 0.5): -float("inf")}) == {"1,0.5": "-inf"}


def test_summary_shows_flat_hessian_sign(capsys):
    report = {
        "version": "test",
        "summary": {"pass": 1},
        "results": [{
            "check": "flat-hessian", "target": "flat-torus", "params": {"alpha": 1.0, "beta": 0.0},
            "verdict": "pass",
            "result": {"predicted": 1558.5454565440389, "finite_difference": -1558.54545,
                       "mismatch_predicted": 2.0, "mismatch_negated": 4e-9},
        }],
        "narrative": [],
        "wall_time": 0.0,
    }
    print_summary(report)
    output = capsys.readouterr().out
    assert "Flat Hessian" in output
    assert "pass: fd -1558.54545" in output
    assert "mismatch vs predicted 2" in output
    assert "vs negated 4e-09" in output
