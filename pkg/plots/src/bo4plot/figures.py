"""The three figure kinds.

Each function reads one artifact, writes one PNG, and returns a small result
dict (what was plotted, where).  Inputs are never written to, and rendering
goes through the pinned style so identical inputs give byte-identical images.
Input format is picked by suffix: .json artifacts are check reports, anything
else is CSV.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib import colormaps

from .schemas import (
    SchemaError,
    read_manifest,
    read_report,
    read_trajectory,
    read_xy_csv,
    require_columns,
)
from .style import new_figure, render_to

_LOG_FLOOR = 1e-18  # keeps exactly-zero magnitudes drawable on a log axis


# -- energy traces ----------------------------------------------------------------


def _loss_rows(payload: dict, path) -> list[dict]:
    for report in payload["reports"]:
        details = report.get("details")
        if isinstance(details, dict) and isinstance(details.get("rows"), list):
            rows = details["rows"]
            for key in ("k0", "r_naive", "r_corr"):
                for row in rows:
                    if key not in row:
                        raise SchemaError(f"{path}: rate row missing key {key!r}")
            return sorted(rows, key=lambda r: r["k0"])
    raise SchemaError(
        f"{path}: no report with details.rows (growth-rate comparison schema)"
    )


def energy_trace(in_path, out_path, *, log_scale: bool = False) -> dict:
    """Energy quantities over time, or naive-vs-corrected growth rates.

    CSV input: overlays the squared H^s norm and both energy functionals
    against t.  JSON input: a derivative-loss report; paired panels of the
    naive and corrected growth rate per forced mode k0.
    """
    in_path = Path(in_path)
    if in_path.suffix == ".json":
        rows = _loss_rows(read_report(in_path), in_path)
        k0 = [row["k0"] for row in rows]
        fig, (ax_naive, ax_corr) = new_figure(ncols=2)
        ax_naive.loglog(k0, [row["r_naive"] for row in rows], "o-")
        ax_corr.loglog(k0, [row["r_corr"] for row in rows], "o-", color="C1")
        ax_naive.set_title("naive rate")
        ax_corr.set_title("corrected rate")
        for ax in (ax_naive, ax_corr):
            ax.set_xlabel("$k_0$")
        ax_naive.set_ylabel("growth rate / $E_s$")
        render_to(fig, out_path)
        return {"kind": "energy_trace", "n_rows": len(rows), "out": str(out_path)}

    columns = read_trajectory(in_path)
    require_columns(columns, ("E_s", "E_l2"), in_path)
    hs_name = next((c for c in columns if c.startswith("hs_")), None)
    if hs_name is None:
        raise SchemaError(
            f"{in_path}: missing column 'hs_<s>'; have {sorted(columns)}"
        )
    t = columns["t"]
    fig, ax = new_figure()
    order = hs_name[3:]
    ax.plot(t, columns[hs_name] ** 2, label=rf"$\|D^{{{order}}} u\|^2$")
    ax.plot(t, columns["E_s"], label="$E_s$")
    ax.plot(t, columns["E_l2"], label="$E$")
    if log_scale:
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("energy")
    ax.set_title("energy traces")
    ax.legend()
    render_to(fig, out_path)
    return {"kind": "energy_trace", "n_samples": len(t), "out": str(out_path)}


# -- log-log slope fits -------------------------------------------------------------


def _series_from_reports(payload: dict, path) -> tuple[np.ndarray, np.ndarray, float | None, str]:
    """First report carrying a rate series: (x, y, guide slope or None, x label)."""
    for report in payload["reports"]:
        details = report.get("details")
        if not isinstance(details, dict):
            continue
        if "etas" in details and "errors" in details:
            x = np.asarray(details["etas"], dtype=float)
            y = np.asarray(details["errors"], dtype=float)
            return x, y, report.get("bound"), "eta"
        err_keys = [k for k in details if k.startswith("errors_alpha=")]
        if "eps" in details and err_keys:
            y = np.asarray(details[err_keys[0]], dtype=float)
            # the reference (smallest-eps) run carries no error entry
            x = np.asarray(details["eps"], dtype=float)[: len(y)]
            return x, y, report.get("bound"), "epsilon"
    raise SchemaError(
        f"{path}: no report with a rate series "
        "(need details with etas+errors or eps+errors_alpha=*)"
    )


def loglog_fit(in_path, out_path) -> dict:
    """Scatter + fitted power law, slope annotated; reports add a guide line.

    CSV input: first two columns are (x, y).  JSON input: the first report
    holding a rate series; its acceptance bound becomes a dashed guide slope.
    """
    in_path = Path(in_path)
    if in_path.suffix == ".json":
        x, y, guide_slope, x_name = _series_from_reports(read_report(in_path), in_path)
        y_name = "error"
    else:
        x, y, (x_name, y_name) = read_xy_csv(in_path)
        guide_slope = None
    live = (np.asarray(x) > 0.0) & (np.asarray(y) > 0.0)
    if int(live.sum()) < 3:
        raise SchemaError(
            f"{in_path}: need at least 3 positive points to fit a slope, "
            f"have {int(live.sum())}"
        )
    x, y = np.asarray(x, dtype=float)[live], np.asarray(y, dtype=float)[live]
    idx = np.argsort(x)
    x, y = x[idx], y[idx]
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    slope = float(slope)
    annotation = f"slope = {slope:.3f}"

    fig, ax = new_figure()
    ax.loglog(x, y, "o", label="data")
    ax.loglog(x, np.exp(intercept) * x**slope, "-", label=f"fit: {annotation}")
    if guide_slope is not None:
        guide_slope = float(guide_slope)
        ax.loglog(
            x,
            y[0] * (x / x[0]) ** guide_slope,
            "--",
            color="C3",
            label=f"acceptance slope {guide_slope:g}",
        )
    ax.annotate(annotation, xy=(0.04, 0.92), xycoords="axes fraction")
    ax.set_xlabel(x_name)
    ax.set_ylabel(y_name)
    ax.set_title("log-log fit")
    ax.legend()
    render_to(fig, out_path)
    return {
        "kind": "loglog_fit",
        "slope": slope,
        "annotation": annotation,
        "n_points": int(len(x)),
        "out": str(out_path),
    }


# -- spectrum waterfalls -------------------------------------------------------------


def spectrum_waterfall(in_path, out_path) -> dict:
    """One amplitude-spectrum line per snapshot, colored by sample time."""
    in_path = Path(in_path)
    manifest, snaps = read_manifest(in_path)
    count, n = snaps.shape
    if count == 0:
        raise SchemaError(f"{in_path}: no snapshots to plot")
    times = manifest["times"]
    k = np.arange(1, n // 2 + 1)
    fig, ax = new_figure()
    cmap = colormaps["viridis"]
    for i, row in enumerate(snaps):
        mag = np.maximum(np.abs(np.fft.rfft(row))[1:] / n, _LOG_FLOOR)
        label = f"t = {times[i]:g}" if i in (0, count - 1) and count > 1 else None
        ax.semilogy(k, mag, color=cmap(i / max(count - 1, 1)), label=label)
    ax.set_xlabel("mode k")
    ax.set_ylabel(r"$|\hat u_k| / n$")
    ax.set_title(f"spectrum waterfall ({count} snapshots)")
    if count > 1:
        ax.legend()
    render_to(fig, out_path)
    return {
        "kind": "spectrum_waterfall",
        "n_snapshots": count,
        "grid_n": n,
        "out": str(out_path),
    }
