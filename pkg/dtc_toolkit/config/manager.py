"""
Configuration manager for the DTC toolkit.

This module handles loading, saving, and updating configuration settings,
and turns configuration blocks into validated run, device and basis models.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import ValidationError

from dtc_toolkit.config.defaults import get_default_config, merge_with_defaults
from dtc_toolkit.exceptions import ConfigError
from dtc_toolkit.models.circuit import BasisConfig, CircuitParams
from dtc_toolkit.models.config import RunConfig

# Setup logging
logger = logging.getLogger(__name__)


class ConfigManager:
    """
    Manages configuration settings for the DTC toolkit.

    The user configuration lives in a JSON file under ``CONFIG_DIR``; run
    configurations passed with ``--config`` are merged over it.
    """

    # Configuration paths
    CONFIG_DIR = Path.home() / ".dtc_toolkit"
    CONFIG_FILE = CONFIG_DIR / "config.json"

    @classmethod
    def init_config(cls) -> None:
        """
        Create the configuration directory and a default config file.

        Raises:
            ConfigError: If there's an error creating configuration files.
        """
        try:
            cls.CONFIG_DIR.mkdir(exist_ok=True, parents=True)

            if not cls.CONFIG_FILE.exists():
                with open(cls.CONFIG_FILE, "w") as f:
                    json.dump(get_default_config(), f, indent=2)
                logger.info(f"Created default config at {cls.CONFIG_FILE}")

        except Exception as e:
            raise ConfigError(
                f"Failed to initialize configuration: {e}",
                config_file=str(cls.CONFIG_FILE),
                cause=e,
            )

    @classmethod
    def load_config(cls, path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
        """
        Load configuration merged over the defaults.

        Args:
            path: Explicit configuration file. When omitted the user config
                file is used (and created with defaults if missing).

        Returns:
            Dict[str, Any]: Configuration settings as a dictionary.

        Raises:
            ConfigError: If an explicit file is missing or invalid, or the
                user configuration cannot be read.
        """
        if path is not None:
            return cls._load_explicit(Path(path))

        try:
            cls.CONFIG_DIR.mkdir(exist_ok=True, parents=True)

            if not cls.CONFIG_FILE.exists():
                default_config = get_default_config()
                cls.save_config(default_config)
                return default_config

            with open(cls.CONFIG_FILE, "r") as f:
                config = json.load(f)

            return merge_with_defaults(config)

        except json.JSONDecodeError as e:
            logger.warning(f"Error decoding config file: {e}")
            logger.warning("Using default configuration")

            if cls.CONFIG_FILE.exists():
                backup_file = cls.CONFIG_FILE.with_suffix(".json.bak")
                cls.CONFIG_FILE.rename(backup_file)
                logger.info(f"Backed up corrupt config file to {backup_file}")

            default_config = get_default_config()
            cls.save_config(default_config)
            return default_config

        except ConfigError:
            raise

        except Exception as e:
            raise ConfigError(
                f"Failed to load configuration: {e}",
                config_file=str(cls.CONFIG_FILE),
                cause=e,
            )

    @classmethod
    def _load_explicit(cls, path: Path) -> Dict[str, Any]:
        try:
            with open(path, "r") as f:
                config = json.load(f)
        except FileNotFoundError as e:
            raise ConfigError(
                f"Configuration file not found: {path}", config_file=str(path), cause=e
            )
        except json.JSONDecodeError as e:
            raise ConfigError(
                f"Invalid JSON in configuration file: {e}", config_file=str(path), cause=e
            )
        if not isinstance(config, dict):
            raise ConfigError(
                "Configuration file must hold a JSON object", config_file=str(path)
            )
        logger.debug(f"Loaded configuration from {path}")
        return merge_with_defaults(config)

    @classmethod
    def save_config(cls, config: Dict[str, Any]) -> None:
        """
        Save configuration to the user config file.

        Args:
            config: Configuration settings to save.

        Raises:
            ConfigError: If there's an error saving the configuration.
        """
        try:
            cls.CONFIG_DIR.mkdir(exist_ok=True, parents=True)

            with open(cls.CONFIG_FILE, "w") as f:
                json.dump(config, f, indent=2)

            logger.debug("Configuration saved successfully")

        except Exception as e:
            raise ConfigError(
                f"Failed to save configuration: {e}",
                config_file=str(cls.CONFIG_FILE),
                cause=e,
            )

    @classmethod
    def update_config_value(cls, key: str, value: Any) -> None:
        """
        Update a single top-level configuration value.

        Raises:
            ConfigError: If there's an error updating the configuration.
        """
        try:
            config = cls.load_config()
            config[key] = value
            cls.save_config(config)
            logger.debug(f"Updated config: {key}={value}")

        except Exception as e:
            raise ConfigError(
                f"Failed to update configuration: {e}", config_key=key, cause=e
            )

    @classmethod
    def get_config_value(cls, key: str, default: Optional[Any] = None) -> Any:
        """
        Get a configuration value with fallback to default.

        Args:
            key: Configuration key to retrieve.
            default: Default value if key is not found.
        """
        try:
            return cls.load_config().get(key, default)
        except ConfigError:
            return default

    @classmethod
    def load_run_config(cls, path: Optional[Union[str, Path]] = None) -> RunConfig:
        """
        Load and validate a run configuration.

        Raises:
            ConfigError: If the file cannot be read or fails validation.
        """
        config = cls.load_config(path)
        try:
            return RunConfig(
                device=config.get("device"),
                basis=config.get("basis", {}),
                commands=config.get("commands", {}),
                output_dir=config.get("output_dir", "dtc_output"),
                seed=config.get("seed", 0),
                threads=config.get("threads", 1),
                log_level=str(config.get("log_level", "INFO")).upper(),
            )
        except ValidationError as e:
            raise ConfigError(
                f"Invalid run configuration: {e}",
                config_file=str(path) if path else str(cls.CONFIG_FILE),
                cause=e,
            )

    @classmethod
    def load_device(cls, source: Union[str, Path, Dict[str, Any], None]) -> CircuitParams:
        """
        Build circuit parameters from a dict, a JSON device file or the defaults.

        Raises:
            ConfigError: If the device description is missing or invalid.
        """
        config_file = None
        if source is None:
            data = get_default_config()["device"]
        elif isinstance(source, dict):
            data = source
        else:
            config_file = str(source)
            try:
                with open(source, "r") as f:
                    data = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                raise ConfigError(
                    f"Failed to read device file: {e}", config_file=config_file, cause=e
                )
            data = data.get("device", data)

        try:
            return CircuitParams.from_dict(data)
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(
                f"Invalid device parameters: {e}",
                config_key="device",
                config_file=config_file,
                cause=e,
            )

    @classmethod
    def load_basis(cls, overrides: Optional[Dict[str, Any]] = None) -> BasisConfig:
        """
        Build a basis configuration from the defaults plus overrides.

        Raises:
            ConfigError: If the resulting basis is invalid.
        """
        data = dict(get_default_config()["basis"])
        data.update(overrides or {})
        try:
            return BasisConfig(**data)
        except (TypeError, ValidationError) as e:
            raise ConfigError(f"Invalid basis configuration: {e}", config_key="basis", cause=e)
