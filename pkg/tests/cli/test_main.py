import importlib
import json

import pytest

from dtc_toolkit.cli.main import (
    EXIT_CONFIG,
    EXIT_FAILURE,
    EXIT_INTERRUPTED,
    EXIT_NUMERICAL,
    EXIT_OK,
    main,
)
from dtc_toolkit.exceptions import ConvergenceError, DomainError
from dtc_toolkit.utils.io import MANIFEST_NAME, read_csv


def _json(path):
    with open(path, "r") as f:
        return json.load(f)


@pytest.fixture
def out_dir(tmp_path, temp_config_dir):
    return tmp_path / "out"


def test_cz_metrics_from_errors(out_dir, capsys):
    code = main(["--out", str(out_dir), "--seed", "3", "cz-metrics", "--l1-cz", "0.00027", "--r-cz", "0.0009"])
    assert code == EXIT_OK

    metrics = _json(out_dir / "metrics.json")
    assert metrics["f_bar"] == pytest.approx(0.9990325, abs=1e-12)

    manifest = _json(out_dir / MANIFEST_NAME)
    assert manifest["command"] == "cz-metrics"
    assert manifest["seed"] == 3
    assert manifest["outputs"] == ["metrics.json"]

    assert "metrics.json" in capsys.readouterr().out


@pytest.mark.slow
def test_spectrum_with_default_basis(out_dir):
    code = main(
        ["--out", str(out_dir), "spectrum", "--flux-min", "0.30", "--flux-max", "0.31", "--points", "3"]
    )
    assert code == EXIT_OK
    summary = _json(out_dir / "transitions.json")
    assert summary["transitions_ghz"]["Q1"] < summary["transitions_ghz"]["Q2"]
    assert len(set(read_csv(out_dir / "spectrum.csv")["phi_ex_over_2pi"])) == 3


def test_quiet_run_prints_nothing(out_dir, capsys):
    code = main(["--out", str(out_dir), "--quiet", "cz-metrics", "--l1-cz", "0.0", "--r-cz", "0.001"])
    assert code == EXIT_OK
    assert capsys.readouterr().out == ""


def test_rb_sim_is_reproducible(tmp_path, temp_config_dir):
    args = ["rb-sim", "--m-values", "1", "10", "50", "--n-sequences", "2", "--shots", "200"]
    assert main(["--out", str(tmp_path / "a"), "--seed", "11", *args]) == EXIT_OK
    assert main(["--out", str(tmp_path / "b"), "--seed", "11", *args]) == EXIT_OK

    first = (tmp_path / "a" / "rb_irb.csv").read_text()
    assert first == (tmp_path / "b" / "rb_irb.csv").read_text()
    columns = read_csv(tmp_path / "a" / "rb_srb.csv")
    assert columns["variant"][0] == "SRB"
    assert len(columns["m"]) == 3 * 2


def test_rb_sim_then_lrb_fit(tmp_path, temp_config_dir):
    sim = tmp_path / "sim"
    assert (
        main(["--out", str(sim), "rb-sim", "--m-values", "1", "20", "50", "100", "200", "--n-sequences", "1"])
        == EXIT_OK
    )
    fit = tmp_path / "fit"
    code = main(
        [
            "--out",
            str(fit),
            "lrb-fit",
            "--srb-file",
            str(sim / "rb_srb.csv"),
            "--irb-file",
            str(sim / "rb_irb.csv"),
        ]
    )
    assert code == EXIT_OK
    metrics = _json(fit / "metrics.json")
    assert metrics["l1_cz"] == pytest.approx(2.7e-4, abs=2e-5)
    assert set(_json(fit / MANIFEST_NAME)["outputs"]) == {
        "fit_irb.json",
        "fit_srb.json",
        "metrics.json",
    }

    again = tmp_path / "again"
    code = main(
        [
            "--out",
            str(again),
            "cz-metrics",
            "--srb-fit",
            str(fit / "fit_srb.json"),
            "--irb-fit",
            str(fit / "fit_irb.json"),
        ]
    )
    assert code == EXIT_OK
    assert _json(again / "metrics.json")["f_bar"] == pytest.approx(metrics["f_bar"])


def test_qpt_with_depolarizing_noise(out_dir):
    code = main(["--out", str(out_dir), "qpt", "--spam", "none", "--depolarizing", "0.02"])
    assert code == EXIT_OK
    summary = _json(out_dir / "qpt.json")
    assert summary["fidelity"] == pytest.approx(1.0 - 0.75 * 0.02, abs=1e-9)
    assert len((out_dir / "ptm.csv").read_text().splitlines()) == 17
    assert len((out_dir / "ptm_long.csv").read_text().splitlines()) == 257


def test_pulse_gen_then_predistort(tmp_path, temp_config_dir):
    pulse = tmp_path / "pulse"
    assert main(["--out", str(pulse), "pulse-gen", "--amplitude", "0.16"]) == EXIT_OK
    summary = _json(pulse / "pulse.json")
    assert summary["peak"] == pytest.approx(0.16)
    assert len(summary["controls"]) == 20

    corrected = tmp_path / "corrected"
    code = main(
        [
            "--out",
            str(corrected),
            "predistort",
            "--waveform-file",
            str(pulse / "waveform.csv"),
            "--model",
            "short_term",
        ]
    )
    assert code == EXIT_OK
    assert _json(corrected / "predistort.json")["roundtrip_error"] < 1e-6


def test_gate_length_study_with_synthetic_t_eff(out_dir):
    assert main(["--out", str(out_dir), "gate-length-study", "--t-eff-us", "23.9"]) == EXIT_OK
    fit = _json(out_dir / "gate_length_fit.json")
    assert fit["t_eff_us"] == pytest.approx(23.9, rel=1e-6)
    assert fit["outliers"] == []


def test_error_budget(out_dir):
    assert main(["--out", str(out_dir), "error-budget", "--gate-time", "48"]) == EXIT_OK
    report = _json(out_dir / "error_budget.json")
    assert report["budget"]["composed_total"] > 0.0
    assert "flux_noise" not in report


def test_toy_model_for_given_alpha(out_dir):
    assert main(["--out", str(out_dir), "toy-model", "--alpha", "0.5"]) == EXIT_OK
    summary = _json(out_dir / "toy_model.json")
    assert summary["idle_point"] == pytest.approx(0.25 + 1.0 / 6.0)
    assert not (out_dir / "potential_surface.csv").exists()


def test_invalid_argument_combination(out_dir, capsys):
    assert main(["--out", str(out_dir), "cz-metrics"]) == EXIT_CONFIG
    assert main(["--quiet", "--verbose", "qpt"]) == EXIT_CONFIG
    assert "usage" in capsys.readouterr().err


def test_unknown_command_exits():
    with pytest.raises(SystemExit):
        main(["teleport"])


def test_missing_config_file(tmp_path, temp_config_dir):
    code = main(["--config", str(tmp_path / "missing.json"), "--out", str(tmp_path), "qpt"])
    assert code == EXIT_CONFIG


def test_missing_input_file(out_dir):
    code = main(["--out", str(out_dir), "lrb-fit", "--srb-file", "does-not-exist.csv"])
    assert code == EXIT_CONFIG


@pytest.mark.parametrize(
    "error, expected",
    [
        (ConvergenceError("cutoff reached"), EXIT_NUMERICAL),
        (DomainError("bad value"), EXIT_FAILURE),
        (KeyboardInterrupt(), EXIT_INTERRUPTED),
        (RuntimeError("boom"), EXIT_FAILURE),
    ],
)
def test_exit_codes(out_dir, error, expected, mocker):
    run = mocker.patch.object(importlib.import_module("dtc_toolkit.cli.main"), "run_command", side_effect=error)
    assert main(["--out", str(out_dir), "qpt"]) == expected
    run.assert_called_once()


def test_numerical_failure_reports_details(out_dir, mocker, capsys):
    error = ConvergenceError("coupler charge edge populated", cutoff=16, edge_weight=2e-5)
    mocker.patch.object(importlib.import_module("dtc_toolkit.cli.main"), "run_command", side_effect=error)
    assert main(["--out", str(out_dir), "qpt"]) == EXIT_NUMERICAL
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "dtc: numerical failure: coupler charge edge populated" in captured.err
    assert "  cutoff = 16" in captured.err
    assert "  edge_weight = 2e-05" in captured.err
