import json

import numpy as np
import pytest

from dtc_toolkit.config.manager import ConfigManager
from dtc_toolkit.exceptions import ConfigError
from dtc_toolkit.models import BasisConfig, CircuitParams, RunConfig


def test_init_config_creates_file(temp_config_dir):
    ConfigManager.init_config()
    assert temp_config_dir["config_file"].exists()
    with open(temp_config_dir["config_file"]) as f:
        assert "device" in json.load(f)


def test_load_config_writes_defaults(temp_config_dir):
    config = ConfigManager.load_config()
    assert config["idle_flux"] == 0.309
    assert temp_config_dir["config_file"].exists()


def test_corrupt_user_config_is_backed_up(temp_config_dir):
    temp_config_dir["config_file"].write_text("{not json")
    config = ConfigManager.load_config()
    assert "device" in config
    assert temp_config_dir["config_file"].with_suffix(".json.bak").exists()


def test_save_and_update_config_value(temp_config_dir):
    ConfigManager.save_config({"seed": 1})
    ConfigManager.update_config_value("threads", 4)
    assert ConfigManager.get_config_value("threads") == 4
    assert ConfigManager.get_config_value("seed") == 1
    assert ConfigManager.get_config_value("missing", "fallback") == "fallback"


def test_load_explicit_config_merges_defaults(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"seed": 5, "basis": {"kept_total": 40}}))
    config = ConfigManager.load_config(path)
    assert config["seed"] == 5
    assert config["basis"]["kept_total"] == 40
    assert config["basis"]["charge_cutoff_coupler"] == 16


def test_load_explicit_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        ConfigManager.load_config(tmp_path / "missing.json")

    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        ConfigManager.load_config(bad)


def test_load_run_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps({"seed": 2, "log_level": "debug", "commands": {"zz-scan": {"points": 5}}})
    )
    run = ConfigManager.load_run_config(path)
    assert isinstance(run, RunConfig)
    assert run.seed == 2
    assert run.log_level.value == "DEBUG"
    assert run.command_params("zz-scan") == {"points": 5}
    assert run.command_params("spectrum") == {}


def test_load_run_config_rejects_invalid_values(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"threads": 0}))
    with pytest.raises(ConfigError):
        ConfigManager.load_run_config(path)


def test_load_device_defaults_and_file(tmp_path):
    params = ConfigManager.load_device(None)
    assert isinstance(params, CircuitParams)
    assert params.cap_matrix.shape == (4, 4)
    assert np.allclose(params.cap_matrix, params.cap_matrix.T)

    path = tmp_path / "device.json"
    path.write_text(json.dumps({"device": params.to_dict()}))
    loaded = ConfigManager.load_device(path)
    assert np.allclose(loaded.cap_matrix, params.cap_matrix)
    assert np.allclose(loaded.critical_currents, params.critical_currents)


def test_load_device_errors(tmp_path):
    with pytest.raises(ConfigError):
        ConfigManager.load_device(tmp_path / "missing.json")
    with pytest.raises(ConfigError):
        ConfigManager.load_device({"node_caps": [1.0]})


def test_load_basis_overrides():
    basis = ConfigManager.load_basis({"kept_total": 40})
    assert isinstance(basis, BasisConfig)
    assert basis.kept_total == 40
    with pytest.raises(ConfigError):
        ConfigManager.load_basis({"charge_cutoff_qubit": -1})
