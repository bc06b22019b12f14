"""Entry point: figures <fig1|fig2|table1> <input.csv> <output>.

Image outputs honour the extension (.png or .svg); table1 writes plain
text.
"""

from __future__ import annotations

import argparse
import sys

from .plots import plot_fig1, plot_fig2
from .tables import table1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render benchmark harness CSVs into plots and tables.",
    )
    parser.add_argument("kind", choices=("fig1", "fig2", "table1"))
    parser.add_argument("input", help="summary CSV (fig1, table1) or records CSV (fig2)")
    parser.add_argument("output", help="output image (.png/.svg) or text file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.kind == "fig1":
            plot_fig1(args.input, args.output)
        elif args.kind == "fig2":
            plot_fig2(args.input, args.output)
        else:
            text = table1(args.input, args.output)
            sys.stdout.write(text)
    except (ValueError, OSError) as exc:
        print(f"figures: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
