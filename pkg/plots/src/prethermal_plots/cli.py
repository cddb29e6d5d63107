"""Figure-rendering command line.

    prethermal-plot --figure fig3 --data <dir> --out fig3.png

Reads the CSVs emitted by `prethermal reproduce` from the data directory
and writes one image per invocation.  Exits nonzero on missing files,
missing columns or empty series.
"""

from __future__ import annotations

import argparse
import sys

from .figures import build_figure_spec, render

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="prethermal-plot",
                                     description="Render a preset figure from simulation CSVs.")
    parser.add_argument("--figure", required=True, choices=list(FIGURES))
    parser.add_argument("--data", required=True, help="directory holding the reproduce CSVs")
    parser.add_argument("--out", required=True, help="output image path (.png or .svg)")
    args = parser.parse_args(argv)

    try:
        path = render(build_figure_spec(args.figure, args.data, args.out))
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
