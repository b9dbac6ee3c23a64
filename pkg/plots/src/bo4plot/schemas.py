"""Readers for the simulator's output artifacts.

The simulator writes four artifact shapes: trajectory.csv (a header row of
column names, then one row of %.17g floats per sample), snapshots.bin plus
manifest.json (row-major little-endian float64 snapshots described by the
manifest), and report.json ({"all_passed": ..., "reports": [...]}).  Each
reader validates what the figures actually consume and raises SchemaError
naming the missing piece, so a plot command fails with the column or key that
has to be added rather than a numpy traceback.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """An input file is readable but does not have the expected shape."""


def _read_text(path: Path) -> str:
    try:
        return path.read_text()
    except FileNotFoundError:
        raise SchemaError(f"{path}: no such file") from None


def read_trajectory(path) -> dict[str, np.ndarray]:
    """Parse a trajectory CSV into {column name: float array}.

    Requires a header row containing "t"; every data row must have one cell
    per header column.
    """
    path = Path(path)
    rows = list(csv.reader(_read_text(path).splitlines()))
    if not rows or not rows[0]:
        raise SchemaError(f"{path}: empty file, expected a CSV header row")
    header = rows[0]
    if "t" not in header:
        raise SchemaError(f"{path}: missing column 't' in header {header}")
    data = rows[1:]
    for i, row in enumerate(data):
        if len(row) != len(header):
            raise SchemaError(
                f"{path}: row {i + 2} has {len(row)} cells, header has {len(header)}"
            )
    columns: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        try:
            columns[name] = np.array([float(row[j]) for row in data])
        except ValueError as err:
            raise SchemaError(f"{path}: column {name!r}: {err}") from None
    return columns


def require_columns(columns: dict[str, np.ndarray], names, path) -> None:
    """Raise SchemaError naming the first requested column that is absent."""
    for name in names:
        if name not in columns:
            raise SchemaError(
                f"{path}: missing column {name!r}; have {sorted(columns)}"
            )


def read_manifest(path) -> tuple[dict, np.ndarray]:
    """Load a snapshot manifest and the snapshots.bin beside it.

    Returns (manifest dict, float64 array of shape (snapshot_count, grid_n)).
    """
    path = Path(path)
    try:
        manifest = json.loads(_read_text(path))
    except json.JSONDecodeError as err:
        raise SchemaError(f"{path}: not valid JSON ({err})") from None
    if not isinstance(manifest, dict):
        raise SchemaError(f"{path}: expected a JSON object at top level")
    for key in ("grid_n", "snapshot_count", "dtype", "layout", "times"):
        if key not in manifest:
            raise SchemaError(f"{path}: missing manifest key {key!r}")
    if manifest["dtype"] != "<f8" or manifest["layout"] != "row per sample, node values":
        raise SchemaError(
            f"{path}: unsupported snapshot encoding "
            f"({manifest['dtype']!r}, {manifest['layout']!r})"
        )
    n = int(manifest["grid_n"])
    count = int(manifest["snapshot_count"])
    if len(manifest["times"]) != count:
        raise SchemaError(
            f"{path}: {len(manifest['times'])} times for {count} snapshots"
        )
    bin_path = path.parent / "snapshots.bin"
    try:
        raw = bin_path.read_bytes()
    except FileNotFoundError:
        raise SchemaError(f"{bin_path}: no such file") from None
    expected = 8 * n * count
    if len(raw) != expected:
        raise SchemaError(
            f"{bin_path}: {len(raw)} bytes, manifest implies {expected} "
            f"({count} snapshots of {n} points)"
        )
    shape = (count, n) if count else (0, 0)
    return manifest, np.frombuffer(raw, dtype="<f8").reshape(shape)


def read_report(path) -> dict:
    """Load a check-report JSON file ({"all_passed": ..., "reports": [...]})."""
    path = Path(path)
    try:
        payload = json.loads(_read_text(path))
    except json.JSONDecodeError as err:
        raise SchemaError(f"{path}: not valid JSON ({err})") from None
    if not isinstance(payload, dict) or "reports" not in payload:
        raise SchemaError(f"{path}: missing key 'reports'")
    if not isinstance(payload["reports"], list):
        raise SchemaError(f"{path}: 'reports' must be a list")
    return payload


def read_xy_csv(path) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Read the first two columns of a CSV as (x, y, [x name, y name])."""
    path = Path(path)
    columns = {}
    rows = list(csv.reader(_read_text(path).splitlines()))
    if not rows or len(rows[0]) < 2:
        raise SchemaError(f"{path}: expected a CSV with at least two columns")
    header = rows[0]
    for j in (0, 1):
        try:
            columns[header[j]] = np.array([float(row[j]) for row in rows[1:]])
        except (ValueError, IndexError) as err:
            raise SchemaError(f"{path}: column {header[j]!r}: {err}") from None
    x_name, y_name = header[0], header[1]
    return columns[x_name], columns[y_name], [x_name, y_name]
