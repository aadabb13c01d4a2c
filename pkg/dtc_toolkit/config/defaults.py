"""
Default configuration settings for the DTC toolkit.

This module provides the built-in device, basis, pulse, noise and optimizer
constants and functions to derive configurations from them.
"""

import copy
import os
from typing import Any, Dict

# Basic default configuration
DEFAULT_CONFIG: Dict[str, Any] = {
    # General settings
    "log_level": "INFO",
    "output_dir": "dtc_output",
    "seed": 0,
    "threads": 1,
    # Device (capacitances in fF, critical currents in nA)
    "device": {
        "node_caps": [91.86, 91.79, 110.27, 106.36],
        "mutual_caps": {
            "C12": 0.04,
            "C13": 5.73,
            "C14": 0.17,
            "C23": 0.26,
            "C24": 5.77,
            "C34": 1.73,
        },
        "critical_currents": [26.13, 31.93, 47.73, 47.68, 10.32],
    },
    # Truncated basis
    "basis": {
        "charge_cutoff_qubit": 15,
        "charge_cutoff_coupler": 16,
        "kept_levels_qubit": 6,
        "kept_levels_coupler": 12,
        "kept_total": 60,
        "reference_flux": 0.309,
    },
    # Operating points (phi_ex / 2pi)
    "idle_flux": 0.309,
    "operating_flux": 0.47,
    # Z-pulse step-response models
    "distortion": {
        "short_term": {
            "label": "short_term",
            "terms": [
                {"a": -0.0104, "tau_ns": 603.3},
                {"a": -0.0137, "tau_ns": 79.45},
            ],
        },
        "long_term": {
            "label": "long_term",
            "terms": [
                {"a": 0.12, "tau_ns": 400.5e3},
                {"a": 0.038, "tau_ns": 71.02e3},
                {"a": 0.00525, "tau_ns": 13.60e3},
            ],
        },
    },
    # Adiabatic pulse
    "slepian": {
        "duration": 48.0,
        "dt": 0.5,
        "pad": 2.0,
        "theta_initial": 0.05,
        "theta_final": 1.5207963267948966,
        "n_control": 20,
    },
    "optimizer": {
        "n_control": 20,
        "population": 20,
        "parents": 5,
        "epochs": 100,
        "sigma0": 0.01,
        "sigma_decay": 0.97,
        "target": 0.9999,
    },
    # Coherence (us); a null t_cz means no CZ-correlated dephasing
    "noise": {
        "t1": [228.6, 205.3],
        "t2_ramsey": [132.4, 62.4],
        "t2_echo": [358.9, 129.8],
        "t_cz": None,
    },
    # Readout P(m | n), rows prepared n, columns measured m
    "readout": {
        "q1": [
            [0.9933, 0.0006, 0.0061],
            [0.0121, 0.9787, 0.0092],
            [0.0060, 0.0257, 0.9683],
        ],
        "q2": [
            [0.9973, 0.0017, 0.0010],
            [0.0231, 0.9704, 0.0065],
            [0.0196, 0.0398, 0.9406],
        ],
    },
    "flux_noise": {
        "amplitude": 4.84,
        "f_low": 1.0,
        "f_high": 1.0e7,
        "samples": 200,
    },
}

# Environment overrides: variable -> (key, converter)
ENV_OVERRIDES = {
    "DTC_LOG_LEVEL": ("log_level", str),
    "DTC_OUTPUT_DIR": ("output_dir", str),
    "DTC_SEED": ("seed", int),
    "DTC_THREADS": ("threads", int),
}


def get_default_config() -> Dict[str, Any]:
    """
    Get a copy of the default configuration, with environment overrides applied.

    Returns:
        Dict[str, Any]: Default configuration dictionary

    Raises:
        ValueError: If a numeric environment override cannot be parsed
    """
    config = copy.deepcopy(DEFAULT_CONFIG)

    for variable, (key, convert) in ENV_OVERRIDES.items():
        if os.environ.get(variable):
            config[key] = convert(os.environ[variable])

    return config


def _deep_merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            base[key] = _deep_merge(base[key], value)
        else:
            base[key] = copy.deepcopy(value)
    return base


def reset_to_defaults(config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Reset a configuration dictionary in place to default values.

    Keys that are not part of the defaults are removed.

    Args:
        config: Configuration dictionary to reset

    Returns:
        Dict[str, Any]: Reset configuration dictionary
    """
    defaults = get_default_config()
    config.clear()
    config.update(defaults)
    return config


def merge_with_defaults(config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Deep-merge a configuration dictionary over the default values.

    Nested blocks such as ``device`` or ``basis`` are merged key by key,
    so a user file only needs the entries it changes.

    Args:
        config: Configuration dictionary to merge

    Returns:
        Dict[str, Any]: Merged configuration dictionary
    """
    return _deep_merge(get_default_config(), config)
