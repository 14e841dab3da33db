"""Command line: ``plots heatmap --spec FILE`` and ``plots series ...``."""

from __future__ import annotations

import argparse
import sys

from .figures import QUANTITIES, load_figure_spec, render_heatmaps, render_timeseries


def _cmd_heatmap(args) -> int:
    spec = load_figure_spec(args.spec)
    info = render_heatmaps(spec)
    print(f"wrote {spec.output} ({len(info)} panels)")
    for panel in info:
        extra = ""
        if panel.summary_linf is not None:
            extra = f" (summary |u|_inf {panel.summary_linf:.9g})"
        print(f"  {panel.title}: max {panel.max_value:.9g}{extra}")
    return 0


def _cmd_series(args) -> int:
    curves = render_timeseries(args.summaries, args.quantity, args.out)
    print(f"wrote {args.out} ({len(curves)} curves)")
    for curve in curves:
        print(f"  {curve.label}: {curve.n_points} points")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render solver snapshot/summary files into figures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_heat = sub.add_parser("heatmap", help="panel grid of 2-D snapshots")
    p_heat.add_argument("--spec", required=True, help="figure spec JSON")
    p_heat.set_defaults(func=_cmd_heatmap)

    p_series = sub.add_parser("series", help="time series from summaries")
    p_series.add_argument("--summaries", nargs="+", required=True)
    p_series.add_argument("--quantity", choices=QUANTITIES, required=True)
    p_series.add_argument("--out", default="series.png")
    p_series.set_defaults(func=_cmd_series)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
