#!/usr/bin/env python3
"""
Test script for the cqed command line: figure CSVs, exit codes, audit and scenarios
"""
import json
import os
import sys

import pytest
import yaml

from cqed.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, main
from cqed.config_loader import reload_figure_config
from cqed.figures import loader
from cqed.figures.loader import discover_figures, get_figure_order
from cqed.helpers import read_csv


@pytest.fixture
def restore_figure_config(monkeypatch):
    yield monkeypatch
    monkeypatch.delenv("CQED_CONFIG", raising=False)
    reload_figure_config()


def header(path):
    with open(path) as f:
        return [line for line in f if line.startswith("#")]


def test_fig2_writes_monotone_emission_probability(tmp_path):
    assert main(["--quiet", "fig", "--id", "fig2", "--out", str(tmp_path), "--grid-points", "1001"]) == EXIT_OK
    frame = read_csv(str(tmp_path / "fig2.csv"))
    assert {"g1", "g1_in_kappa1_over_5", "p_cav", "fwhm", "fwhm_numeric", "p_cav_grid"} <= set(frame.columns)
    assert len(frame) == 33
    assert frame["p_cav"].is_monotonic_increasing
    assert frame["fwhm"].is_monotonic_increasing
    assert (frame["fwhm"] - frame["fwhm_numeric"]).abs().max() <= 1e-6 * frame["fwhm"].max()
    assert (frame["p_cav_grid"] <= frame["p_cav"] + 1e-4).all()
    lines = header(str(tmp_path / "fig2.csv"))
    assert lines[0].startswith("# cqed_version:")
    assert "# command: fig2\n" in lines


def test_fig2_plot_writes_svg(tmp_path):
    assert main(["--quiet", "fig", "--id", "fig2", "--out", str(tmp_path), "--grid-points", "401", "--plot"]) == EXIT_OK
    assert (tmp_path / "fig2.svg").read_text().lstrip().startswith("<?xml")


def test_fig4_reruns_are_byte_identical(tmp_path):
    argv = ["--quiet", "fig", "--id", "fig4", "--out", str(tmp_path), "--grid-points", "1001"]
    assert main(argv) == EXIT_OK
    first = (tmp_path / "fig4.csv").read_bytes()
    assert main(argv) == EXIT_OK
    assert (tmp_path / "fig4.csv").read_bytes() == first
    frame = read_csv(str(tmp_path / "fig4.csv"))
    assert {"t", "t_in_2_over_kappa2", "t_in_kappa2_over_2", "p", "fidelity"} <= set(frame.columns)


def test_audit_is_reproducible(tmp_path):
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        assert main(["--quiet", "audit", "--seed", "1", "--n", "5", "--out", str(out)]) == EXIT_OK
        outputs.append((out / "audit.csv").read_bytes())
    assert outputs[0] == outputs[1]
    frame = read_csv(str(tmp_path / "a" / "audit.csv"))
    assert len(frame) == 5
    assert frame["pass"].all()


def test_audit_needs_at_least_one_draw(tmp_path):
    assert main(["--quiet", "audit", "--n", "0", "--out", str(tmp_path)]) == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    [],
    ["fig"],
    ["fig", "--id", "fig9"],
    ["fig", "--id", "fig2", "--grid-points", "many"],
    ["rb87", "--distance-km", "-3"],
])
def test_bad_arguments_exit_with_usage(argv):
    assert main(argv) == EXIT_USAGE


def test_even_grid_is_a_configuration_error(tmp_path):
    assert main(["--quiet", "fig", "--id", "fig2", "--out", str(tmp_path), "--grid-points", "1000"]) == EXIT_USAGE


def test_list_prints_figures_in_order(capsys):
    assert main(["list"]) == EXIT_OK
    printed = capsys.readouterr().out.split()
    assert printed == ["fig2", "fig3", "fig4", "fig5", "fig6", "rb87", "audit"]


def test_loader_follows_the_order_file():
    figures_dir = os.path.dirname(os.path.abspath(loader.__file__))
    assert get_figure_order(figures_dir) == discover_figures()


def test_disabled_figure_is_refused(tmp_path, restore_figure_config):
    override = tmp_path / "figures.json"
    override.write_text(json.dumps({"version": "1.0.0", "figures": {"fig2": {"enabled": False}}}))
    restore_figure_config.setenv("CQED_CONFIG", str(override))
    reload_figure_config()
    assert main(["--quiet", "fig", "--id", "fig2", "--out", str(tmp_path)]) == EXIT_USAGE
    assert not (tmp_path / "fig2.csv").exists()


def test_scenario_command_writes_a_record(tmp_path):
    path = tmp_path / "small.yaml"
    path.write_text(yaml.safe_dump({
        "name": "small",
        "cavity_a": {"g": 0.4, "kappa": 5.0, "gamma": 0.5},
        "cavity_b": {"g": 5.0, "kappa": 2.0, "gamma": 1.0},
        "grid": {"n_points": 1001},
        "timing": {"n_times": 101},
    }))
    assert main(["--quiet", "scenario", "--config", str(path), "--out", str(tmp_path)]) == EXIT_OK
    frame = read_csv(str(tmp_path / "small.csv"))
    assert frame.loc[0, "t_start"] == pytest.approx(2.05)
    assert frame.loc[0, "dt_wait"] == pytest.approx(14.95)
    assert 0 < frame.loc[0, "P_overall"] <= frame.loc[0, "p_cav"]
    assert "# command: scenario\n" in header(str(tmp_path / "small.csv"))


def test_scenario_sweep_writes_rows_and_plot(tmp_path):
    path = tmp_path / "swept.yaml"
    path.write_text(yaml.safe_dump({
        "name": "swept",
        "cavity_a": {"g": 0.4, "kappa": 5.0, "gamma": 0.5},
        "cavity_b": {"g": 5.0, "kappa": 2.0, "gamma": 1.0},
        "grid": {"n_points": 801},
        "timing": {"n_times": 51},
        "sweep": {"axis": "gamma1", "start": 0.1, "stop": 1.0, "n": 3, "gamma2_values": [0.0, 1.0]},
        "output": {"plot": True},
    }))
    assert main(["--quiet", "scenario", "--config", str(path), "--out", str(tmp_path)]) == EXIT_OK
    frame = read_csv(str(tmp_path / "swept_gamma1.csv"))
    assert len(frame) == 6
    assert frame["gamma1"].tolist() == pytest.approx([0.1, 0.55, 1.0] * 2)
    assert sorted(set(frame["gamma2"])) == [0.0, 1.0]
    assert {"p_cav", "p", "fidelity", "p_click", "fidelity_click"} <= set(frame.columns)
    assert frame.groupby("gamma2")["p_cav"].apply(lambda s: s.is_monotonic_decreasing).all()
    assert (tmp_path / "swept_gamma1.svg").exists()
    assert "# command: scenario\n" in header(str(tmp_path / "swept_gamma1.csv"))


def test_scenario_time_sweep(tmp_path):
    path = tmp_path / "timed.yaml"
    path.write_text(yaml.safe_dump({
        "name": "timed",
        "cavity_a": {"g": 0.4, "kappa": 5.0, "gamma": 0.5},
        "cavity_b": {"g": 5.0, "kappa": 2.0, "gamma": 1.0},
        "grid": {"n_points": 801},
        "timing": {"n_times": 51},
        "sweep": {"axis": "t", "start": 0.0, "stop": 10.0, "n": 5},
    }))
    assert main(["--quiet", "scenario", "--config", str(path), "--out", str(tmp_path)]) == EXIT_OK
    frame = read_csv(str(tmp_path / "timed_t.csv"))
    assert frame["t"].tolist() == pytest.approx([0.0, 2.5, 5.0, 7.5, 10.0])
    assert frame.loc[0, "p"] == pytest.approx(1.0, abs=1e-9)
    assert not (tmp_path / "timed_t.svg").exists()


def test_scenario_plot_without_sweep_warns(tmp_path, mocker):
    warn = mocker.patch("cqed.console.warn")
    path = tmp_path / "flat.yaml"
    path.write_text(yaml.safe_dump({
        "name": "flat",
        "cavity_a": {"g": 0.4, "kappa": 5.0, "gamma": 0.5},
        "cavity_b": {"g": 5.0, "kappa": 2.0, "gamma": 1.0},
        "grid": {"n_points": 801},
        "timing": {"n_times": 51},
        "output": {"plot": True},
    }))
    assert main(["--quiet", "scenario", "--config", str(path), "--out", str(tmp_path)]) == EXIT_OK
    assert any("sweep" in call.args[0] for call in warn.call_args_list)
    assert not list(tmp_path.glob("*.svg"))


def test_scenario_with_bad_field_names_it(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text(yaml.safe_dump({
        "cavity_a": {"g": 0.4, "kappa": -5.0, "gamma": 0.5},
        "cavity_b": {"g": 5.0, "kappa": 2.0, "gamma": 1.0},
    }))
    assert main(["scenario", "--config", str(path)]) == EXIT_USAGE
    assert "cavity_a.kappa" in capsys.readouterr().err


def test_grid_too_narrow_is_a_numerical_failure(tmp_path):
    argv = ["--quiet", "fig", "--id", "fig4", "--out", str(tmp_path), "--grid-points", "401", "--grid-width", "0.1"]
    assert main(argv) == EXIT_NUMERICAL


def test_rb87_warns_when_no_convention_matches(tmp_path, mocker):
    record = {"scenario": "rb87", "t_start": 0.1088, "dt_wait": 0.793, "travel_time": 0.0, "detection_opens": 0.1088,
              "p_cav": 0.3, "p": 0.5, "fidelity": 0.9, "P_overall": 0.15, "p_click": 0.4, "fidelity_click": 0.8,
              "P_overall_click": 0.12, "matched_convention": "none"}
    run_rb87 = mocker.patch("cqed.figures.rb87.run_rb87", return_value=record)
    warn = mocker.patch("cqed.console.warn")
    assert main(["rb87", "--out", str(tmp_path)]) == EXIT_OK
    assert run_rb87.call_args.kwargs["reference"]["fidelity"] == 0.9727
    warn.assert_called_once()
    assert read_csv(str(tmp_path / "rb87.csv")).loc[0, "matched_convention"] == "none"


def test_custom_scenario_is_not_held_to_the_reference(tmp_path, mocker):
    run_rb87 = mocker.patch("cqed.figures.rb87.run_rb87", return_value={"matched_convention": "n/a"})
    mocker.patch("cqed.console.summary_table")
    config = tmp_path / "other.yaml"
    config.write_text(yaml.safe_dump({"cavity_a": {"g": 0.4, "kappa": 5.0, "gamma": 0.5},
                                      "cavity_b": {"g": 5.0, "kappa": 2.0, "gamma": 1.0}}))
    assert main(["--quiet", "rb87", "--config", str(config), "--out", str(tmp_path)]) == EXIT_OK
    assert run_rb87.call_args.kwargs["reference"] is None


@pytest.mark.slow
def test_rb87_reports_both_conventions(tmp_path):
    assert main(["--quiet", "rb87", "--out", str(tmp_path), "--distance-km", "1.5"]) == EXIT_OK
    frame = read_csv(str(tmp_path / "rb87.csv"))
    record = frame.iloc[0]
    for column in ("p_cav", "p", "fidelity", "P_overall", "p_click", "fidelity_click", "P_overall_click"):
        assert 0.0 <= record[column] <= 1.0
    assert record["travel_time"] == pytest.approx(1.5 / 0.299792458)
    assert record["t_start"] == pytest.approx(0.1088, abs=1e-4)
    assert record["matched_convention"] in ("none", "spectral", "click", "spectral,click")


if __name__ == "__main__":
    sys.exit(pytest.main([os.path.abspath(__file__), "-v"]))
