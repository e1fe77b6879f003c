"""Command-line wrapper around the chart renderer.

    plot --csv sweep.csv --kind fer_vs_snr --group-by spreading_factor \
         --out figure.png
"""

from __future__ import annotations

import argparse
import sys

from .plotting import FIGURE_KINDS, PlotError, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Plot frame-error-rate curves from a sweep CSV.",
    )
    parser.add_argument("--csv", required=True, help="input sweep CSV")
    parser.add_argument(
        "--kind", required=True, choices=sorted(FIGURE_KINDS),
        help="figure kind; picks the x-axis column",
    )
    parser.add_argument(
        "--group-by", required=True,
        help="parameter column to lead the curve labels, "
        "e.g. spreading_factor",
    )
    parser.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(
        input_csv=args.csv,
        figure_kind=args.kind,
        group_by=args.group_by,
        output_path=args.out,
    )
    try:
        curves = render(spec)
    except (PlotError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out} ({len(curves)} curves)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
