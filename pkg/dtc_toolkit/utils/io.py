"""
Artifact writers for the DTC toolkit.

This module writes the CSV and JSON files produced by every command and the
run manifest that records how they were produced. Output is deterministic:
floats use a fixed format, JSON keys are sorted and no timestamps are
recorded, so regenerating an artifact from its manifest yields identical
bytes.
"""

import csv
import json
import hashlib
import logging
import platform
from pathlib import Path
from importlib import metadata
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

# Setup logging
logger = logging.getLogger(__name__)

FLOAT_FORMAT = ".12g"
MANIFEST_NAME = "manifest.json"


def _format_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    if isinstance(value, (tuple, list)):
        return "".join(str(v) for v in value)
    return str(value)


def to_jsonable(value: Any) -> Any:
    """
    Convert numpy scalars/arrays and nested containers to plain JSON types.

    Non-finite floats become the strings "inf", "-inf" and "nan".
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if np.isfinite(value):
            return value
        return "nan" if np.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Path):
        return str(value)
    return value


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """
    Write rows to a CSV file with a header line.

    Args:
        path: Destination file; parent directories are created
        header: Column names
        rows: Row values; floats are written with a fixed format

    Returns:
        The path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])
            count += 1

    logger.debug(f"Wrote {count} rows to {path}")
    return path


def read_csv(path: Path) -> Dict[str, List[str]]:
    """
    Read a CSV file written by write_csv into a column dictionary.

    Args:
        path: CSV file

    Returns:
        Mapping of column name to the list of raw string values
    """
    with open(path, "r", newline="") as f:
        reader = csv.DictReader(f)
        columns: Dict[str, List[str]] = {name: [] for name in reader.fieldnames or []}
        for row in reader:
            for name in columns:
                columns[name].append(row[name])
    return columns


def write_json(path: Path, payload: Any) -> Path:
    """
    Write a JSON document with sorted keys.

    Args:
        path: Destination file; parent directories are created
        payload: Data to serialize; numpy types are converted

    Returns:
        The path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w") as f:
        json.dump(to_jsonable(payload), f, indent=2, sort_keys=True)
        f.write("\n")

    logger.debug(f"Wrote JSON to {path}")
    return path


def inputs_hash(config: Dict[str, Any]) -> str:
    """Return the SHA-256 of the canonical JSON form of a configuration."""
    canonical = json.dumps(to_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def package_versions() -> Dict[str, str]:
    """Collect the versions of the toolkit and its numerical dependencies."""
    versions = {"python": platform.python_version()}
    for dist in ("dtc-toolkit", "numpy", "scipy", "pydantic"):
        try:
            versions[dist] = metadata.version(dist)
        except metadata.PackageNotFoundError:
            versions[dist] = "unknown"
    return versions


def write_manifest(
    out_dir: Path,
    command: str,
    config: Dict[str, Any],
    seed: Optional[int],
    outputs: Sequence[Path],
) -> Path:
    """
    Write the run manifest next to a command's artifacts.

    Args:
        out_dir: Output directory of the run
        command: Command name
        config: Effective configuration the command ran with
        seed: Seed used by the command (None for deterministic commands)
        outputs: Files written by the command

    Returns:
        Path of the manifest file
    """
    out_dir = Path(out_dir)
    manifest = {
        "command": command,
        "inputs_sha256": inputs_hash(config),
        "seed": seed,
        "versions": package_versions(),
        "outputs": sorted(Path(p).name for p in outputs),
        "config": config,
    }
    return write_json(out_dir / MANIFEST_NAME, manifest)
