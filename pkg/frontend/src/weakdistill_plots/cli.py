"""Command-line entry point: render a figure from experiment CSV files."""
from __future__ import annotations

import argparse
import sys

from .render import (
    BOUND_COLUMNS,
    CURVE_COLUMNS,
    PlotInputError,
    build_panels,
    read_table,
    render,
)

EXIT_OK = 0
EXIT_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render TVD sweep curves and bound curves from CSV files.",
    )
    parser.add_argument("--curves", required=True, help="aggregate curves CSV")
    parser.add_argument("--bounds", required=True, help="bound curves CSV")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument(
        "--panels",
        default=None,
        help="comma-separated panel letters (a,b,c) selecting scenarios in sorted order",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    panels = None
    if args.panels is not None:
        panels = [p.strip() for p in args.panels.split(",") if p.strip()]
    try:
        curve_rows = read_table(args.curves, CURVE_COLUMNS)
        bound_rows = read_table(args.bounds, BOUND_COLUMNS)
        specs = build_panels(curve_rows, bound_rows, panels)
        out = render(specs, args.out)
    except PlotInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
