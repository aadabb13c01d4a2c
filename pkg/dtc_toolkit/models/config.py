"""
Configuration models for the DTC toolkit.

This module defines the Pydantic model of a batch run configuration.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, Field, field_validator


class LogLevel(str, Enum):
    """Valid log levels for the application."""

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class RunConfig(BaseModel):
    """
    Batch run configuration.

    ``device`` is either an inline parameter dictionary or the path of a
    JSON device file; ``commands`` holds one parameter block per CLI
    command name.
    """

    device: Optional[Union[Dict[str, Any], Path]] = Field(
        default=None, description="Device parameters or path to a device file"
    )
    basis: Dict[str, Any] = Field(default_factory=dict, description="Basis overrides")
    commands: Dict[str, Dict[str, Any]] = Field(default_factory=dict)
    output_dir: Path = Field(default=Path("dtc_output"))
    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)
    log_level: LogLevel = Field(default=LogLevel.INFO)

    @field_validator("device")
    @classmethod
    def validate_device(cls, v):
        if isinstance(v, Path) and not v.is_file():
            raise ValueError(f"device file not found: {v}")
        return v

    @field_validator("commands")
    @classmethod
    def validate_referenced_files(cls, v: Dict[str, Dict[str, Any]]):
        for name, block in v.items():
            for key, value in block.items():
                if key.endswith("_file") and value is not None and not Path(value).is_file():
                    raise ValueError(f"{name}.{key} references a missing file: {value}")
        return v

    def command_params(self, command: str) -> Dict[str, Any]:
        return dict(self.commands.get(command, {}))

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")
