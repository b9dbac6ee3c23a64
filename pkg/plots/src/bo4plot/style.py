"""Pinned rendering style.

Determinism contract: identical inputs must render byte-identical images, so
the backend is forced to Agg before pyplot ever loads, every style knob that
affects rasterization is pinned here rather than inherited from user
matplotlibrc files, and the PNG metadata is fixed (the default Software tag
embeds the matplotlib version string).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

#: Every rcParam that feeds the rasterizer, pinned.
STYLE = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 10.0,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "grid.linewidth": 0.6,
    "lines.linewidth": 1.5,
    "lines.markersize": 5.0,
    "legend.framealpha": 0.9,
    "path.simplify": False,
    "svg.hashsalt": "bo4plot",
}

_METADATA = {"Software": "bo4plot"}


def new_figure(ncols: int = 1):
    """Figure/axes under the pinned style (caller must render_to the figure).

    ncols > 1 gives a row of panels sharing the y axis, sized so each panel
    keeps the single-panel aspect.
    """
    with plt.rc_context(STYLE):
        if ncols == 1:
            return plt.subplots()
        w, h = STYLE["figure.figsize"]
        return plt.subplots(1, ncols, sharey=True, figsize=(w * ncols / 1.4, h))


def render_to(fig, out_path) -> None:
    """Write the figure as PNG with pinned metadata and release it."""
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(STYLE):
        fig.savefig(out_path, format="png", metadata=dict(_METADATA))
    plt.close(fig)
