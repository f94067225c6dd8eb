"""Command-line figure renderer for benchmark CSV files.

    plot --in results.csv --kind convergence|error --methods mc,lmc \
         --truth-mean 0.0 --truth-std 1.159 --out fig.svg
"""

import argparse
import sys

from .reader import SchemaError
from .render import PlotSpec, render


def main(argv=None):
    parser = argparse.ArgumentParser(prog="plot", description=__doc__)
    parser.add_argument("--in", dest="csv_path", required=True, help="input CSV")
    parser.add_argument(
        "--kind", default="convergence", help="convergence | error"
    )
    parser.add_argument("--methods", default="", help="comma filter, e.g. mc,lmc")
    parser.add_argument("--truth-mean", type=float, default=None)
    parser.add_argument("--truth-std", type=float, default=None)
    parser.add_argument("--out", default="figure.svg", help="output image (.svg/.png)")
    args = parser.parse_args(argv)
    spec = PlotSpec(
        csv_path=args.csv_path,
        kind=args.kind,
        methods=tuple(m for m in args.methods.split(",") if m),
        out_path=args.out,
        truth_mean=args.truth_mean,
        truth_std=args.truth_std,
    )
    try:
        panels = render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    methods = sorted({m for p in panels for m in p["curves"]})
    print(f"wrote {args.out} ({', '.join(methods)})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
