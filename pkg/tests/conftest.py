"""
Pytest configuration file for DTC toolkit tests.

This file contains fixtures and configuration settings for tests.
"""

import pytest
import logging
from unittest.mock import patch

import numpy as np

# Configure logging for tests
logging.basicConfig(level=logging.DEBUG)


@pytest.fixture(autouse=True)
def disable_logging():
    """Disable logging output during tests."""
    logging.disable(logging.CRITICAL)
    yield
    logging.disable(logging.NOTSET)


@pytest.fixture
def temp_config_dir(tmp_path):
    """
    Create a temporary configuration directory for testing.

    This fixture creates a temporary directory for the user config file
    and patches the ConfigManager paths to use it.
    """
    from dtc_toolkit.config import ConfigManager

    config_dir = tmp_path / ".dtc_toolkit"
    config_dir.mkdir(exist_ok=True)
    config_file = config_dir / "config.json"

    with (
        patch.object(ConfigManager, "CONFIG_DIR", config_dir),
        patch.object(ConfigManager, "CONFIG_FILE", config_file),
    ):
        yield {"dir": config_dir, "config_file": config_file}


@pytest.fixture
def rng():
    """Seeded generator for randomized checks."""
    return np.random.default_rng(1234)
