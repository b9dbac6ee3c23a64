"""Command-line entry point: bo4plot <kind> --in <path> --out <path>.

Exit codes: 0 with a one-line summary on success, 2 with a message on stderr
when the input is missing, malformed, or the output cannot be written.
"""

from __future__ import annotations

import argparse
import sys

from . import figures
from .schemas import SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bo4plot",
        description="Render figures from simulator output artifacts.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    specs = (
        ("energy_trace", "energy functionals over time (CSV) or growth-rate panels (report JSON)"),
        ("loglog_fit", "power-law fit with annotated slope (two-column CSV or report JSON)"),
        ("spectrum_waterfall", "amplitude spectrum per snapshot (manifest JSON)"),
    )
    for kind, help_text in specs:
        p = sub.add_parser(kind, help=help_text)
        p.add_argument("--in", dest="in_path", required=True, metavar="PATH",
                       help="input artifact")
        p.add_argument("--out", dest="out_path", required=True, metavar="PATH",
                       help="output PNG path")
        if kind == "energy_trace":
            p.add_argument("--log", action="store_true",
                           help="log-scale the energy axis")
    return parser


def _summary(result: dict) -> str:
    out = result["out"]
    if result["kind"] == "loglog_fit":
        return f"wrote {out}: {result['annotation']} from {result['n_points']} points"
    if result["kind"] == "spectrum_waterfall":
        return (
            f"wrote {out}: {result['n_snapshots']} snapshots, "
            f"grid n = {result['grid_n']}"
        )
    if "n_rows" in result:
        return f"wrote {out}: rate comparison over {result['n_rows']} modes"
    return f"wrote {out}: energy traces, {result['n_samples']} samples"


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.kind == "energy_trace":
            result = figures.energy_trace(
                args.in_path, args.out_path, log_scale=args.log
            )
        elif args.kind == "loglog_fit":
            result = figures.loglog_fit(args.in_path, args.out_path)
        else:
            result = figures.spectrum_waterfall(args.in_path, args.out_path)
    except (SchemaError, OSError) as err:
        print(f"bo4plot: {err}", file=sys.stderr)
        return 2
    print(_summary(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
