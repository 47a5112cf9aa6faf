import json
import os

import pytest

from tunnelkit.cli.artifacts import read_summary
from tunnelkit.cli.main import EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK, main
from tunnelkit.cli.runner import resolve_output_dir
from tunnelkit.cli.scenario import load_scenario


def test_list_builtins(capsys):
    assert main(["list-builtins"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 13
    assert any(line.startswith("caustic-tanh\t") for line in lines)


def test_validate(capsys):
    assert main(["validate", "surgery-homogeneous"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "surgery-homogeneous: ok"


def test_validate_rejects_bad_input(tmp_path, capsys):
    assert main(["validate", "no-such-scenario"]) == EXIT_ERROR
    assert capsys.readouterr().err.startswith("error: ")
    path = tmp_path / "descending.yaml"
    path.write_text(
        "schema: 1\nname: bad\nepsilons: [0.01, 0.1]\n"
        "experiment:\n  type: experiment_weak_asymptotics\n"
    )
    assert main(["validate", str(path)]) == EXIT_ERROR


def test_run_writes_artifacts(fixture_small_convex, tmp_path, capsys):
    output_dir = str(tmp_path / "out")
    assert main(["run", fixture_small_convex, "--output-dir", output_dir]) == EXIT_OK
    assert "PASS\tcaustic_presence" in capsys.readouterr().out
    summary = read_summary(output_dir)
    assert summary.passed
    assert summary.scenario == "small-convex"
    assert summary.experiment == "experiment_characteristics"
    assert summary.metrics["t_star"] is None
    assert summary.metrics["caustic_count"] == 0.0
    for name in ("fan.csv", "caustics.json", "phase.csv", "strata.json", "summary.json"):
        assert name in summary.artifacts
        assert os.path.isfile(os.path.join(output_dir, name))
    with open(os.path.join(output_dir, "caustics.json")) as f:
        assert json.load(f) == []


def test_failed_check_exits_with_one(fixture_small_convex_expecting_caustic, tmp_path, capsys):
    output_dir = str(tmp_path / "out")
    code = main(["run", fixture_small_convex_expecting_caustic, "--output-dir", output_dir])
    assert code == EXIT_CHECK_FAILED
    assert "FAIL\tcaustic_presence" in capsys.readouterr().out
    assert not read_summary(output_dir).passed


def test_precondition_error_exits_with_two(fixture_reference_with_potential, tmp_path, capsys):
    code = main(["run", fixture_reference_with_potential, "--output-dir", str(tmp_path / "out")])
    assert code == EXIT_ERROR
    err = capsys.readouterr().err
    assert "reference-potential" in err
    assert "PreconditionError" in err


def test_output_dir_resolution(monkeypatch, tmp_path):
    scenario = load_scenario("shock-oracles")
    assert resolve_output_dir(scenario, "explicit") == "explicit"
    monkeypatch.setenv("TUNNELKIT_OUTPUT_DIR", str(tmp_path))
    assert resolve_output_dir(scenario) == os.path.join(str(tmp_path), "shock-oracles")
    monkeypatch.delenv("TUNNELKIT_OUTPUT_DIR")
    assert resolve_output_dir(scenario) == os.path.join("runs", "shock-oracles")


def test_trace_reports_span_durations(fixture_small_convex, tmp_path, capsys):
    code = main(["--trace", "run", fixture_small_convex, "--output-dir", str(tmp_path / "out")])
    assert code == EXIT_OK
    assert "cli.run_scenario:" in capsys.readouterr().err


def test_shock_oracles_builtin_passes(tmp_path):
    output_dir = str(tmp_path / "shock")
    assert main(["run", "shock-oracles", "--output-dir", output_dir]) == EXIT_OK
    summary = read_summary(output_dir)
    assert [check.name for check in summary.checks] == [
        "rankine_hugoniot_error",
        "amplitude_flux_error",
        "amplitude_reaction_error",
    ]
    assert summary.metrics["amplitude_final"] == pytest.approx(2.0)
    assert os.path.isfile(os.path.join(output_dir, "amplitude.csv"))


def test_weak_sqrt_builtin_passes(tmp_path):
    output_dir = str(tmp_path / "weak")
    assert main(["run", "weak-sqrt", "--output-dir", output_dir]) == EXIT_OK
    summary = read_summary(output_dir)
    assert 0.4 <= summary.metrics["slope"] <= 0.6
    assert summary.metrics["final_residual"] <= 1e-2
    with open(os.path.join(output_dir, "weak_residual.csv")) as f:
        assert f.readline().strip() == "epsilon,residual"
