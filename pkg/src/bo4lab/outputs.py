"""Bit-stable serialization of trajectories and check reports.

Three artifacts per run directory:

* ``trajectory.csv``   -- t plus every recorded diagnostic column, printed
  with 17 significant digits so float64 values round-trip exactly;
* ``snapshots.bin``    -- the sampled states as little-endian float64 node
  values, row per sample, with a JSON sidecar ``manifest.json`` carrying
  the grid size, sample times, verbatim config echo, git-describe string,
  and seed (no timestamps: identical runs must be byte-identical);
* ``report.json``      -- structured CheckReport dump with an ``all_passed``
  rollup.
"""

from __future__ import annotations

import json
import subprocess
from pathlib import Path

import numpy as np

from .diagnostics.report import CheckReport
from .evolve import Trajectory

__all__ = [
    "git_describe",
    "format_float",
    "write_trajectory_csv",
    "write_snapshots",
    "write_report",
    "write_run_outputs",
]

_GIT_DESCRIBE: str | None = None


def git_describe() -> str:
    """Repository version string for manifests; 'unknown' outside a repo."""
    global _GIT_DESCRIBE
    if _GIT_DESCRIBE is None:
        try:
            out = subprocess.run(
                ["git", "describe", "--always", "--dirty"],
                cwd=Path(__file__).resolve().parent,
                capture_output=True,
                text=True,
                timeout=10.0,
                check=False,
            )
            _GIT_DESCRIBE = out.stdout.strip() if out.returncode == 0 else "unknown"
        except (OSError, subprocess.TimeoutExpired):
            _GIT_DESCRIBE = "unknown"
    return _GIT_DESCRIBE


def format_float(x: float) -> str:
    """17 significant digits: lossless float64 round-trip."""
    return f"{float(x):.17g}"


def _io_error(path: Path, err: OSError) -> OSError:
    return OSError(f"cannot write {path}: {err}")


def write_trajectory_csv(path, traj: Trajectory) -> Path:
    path = Path(path)
    columns = {k: np.asarray(v) for k, v in traj.diagnostics.items()}
    header = ["t", *columns]
    lines = [",".join(header)]
    for i, t in enumerate(traj.times):
        row = [format_float(t)] + [format_float(col[i]) for col in columns.values()]
        lines.append(",".join(row))
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as err:
        raise _io_error(path, err) from err
    return path


def write_snapshots(out_dir, traj: Trajectory, config_text: str, seed: int) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    bin_path = out_dir / "snapshots.bin"
    manifest_path = out_dir / "manifest.json"
    if traj.snapshots:
        data = np.stack([f.values for f in traj.snapshots]).astype("<f8")
        n_points = traj.snapshots[0].grid.n_points
    else:
        data = np.zeros((0, 0), dtype="<f8")
        n_points = 0
    manifest = {
        "grid_n": int(n_points),
        "snapshot_count": int(data.shape[0]),
        "dtype": "<f8",
        "layout": "row per sample, node values",
        "times": [float(t) for t in traj.times],
        "dt": float(traj.dt),
        "status": traj.status,
        "blowup_time": traj.blowup_time,
        "seed": int(seed),
        "config": config_text,
        "git_describe": git_describe(),
    }
    try:
        bin_path.write_bytes(data.tobytes())
        manifest_path.write_text(
            json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
    except OSError as err:
        raise _io_error(bin_path, err) from err
    return bin_path, manifest_path


def write_report(path, reports: list[CheckReport]) -> Path:
    path = Path(path)
    payload = {
        "all_passed": bool(all(r.passed for r in reports)),
        "reports": [r.to_dict() for r in reports],
    }
    try:
        path.write_text(
            json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
    except OSError as err:
        raise _io_error(path, err) from err
    return path


def write_run_outputs(
    out_dir,
    reports: list[CheckReport],
    traj: Trajectory | None = None,
    config_text: str = "",
    seed: int = 0,
) -> list[Path]:
    """Write report.json plus, when a trajectory is given, the CSV/bin pair."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise _io_error(out_dir, err) from err
    written = [write_report(out_dir / "report.json", reports)]
    if traj is not None:
        written.append(write_trajectory_csv(out_dir / "trajectory.csv", traj))
        written.extend(write_snapshots(out_dir, traj, config_text, seed))
    return written
