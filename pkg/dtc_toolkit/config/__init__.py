"""
Configuration management for the DTC toolkit.

This package provides the built-in device and model defaults and tools for
loading, saving and validating configuration files.
"""

from dtc_toolkit.config.manager import ConfigManager
from dtc_toolkit.config.defaults import (
    DEFAULT_CONFIG,
    get_default_config,
    merge_with_defaults,
    reset_to_defaults,
)

__all__ = [
    "ConfigManager",
    "DEFAULT_CONFIG",
    "get_default_config",
    "merge_with_defaults",
    "reset_to_defaults",
]
