"""Command-line front: flags mirror PlotSpec fields."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .render import KINDS, PlotSpec, SchemaError, render


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="kpzplot", description="render kpzlab experiment CSVs to figures"
    )
    ap.add_argument("--version", action="version", version=f"kpzplot {__version__}")
    ap.add_argument("--input-csv", required=True)
    ap.add_argument("--kind", required=True, choices=KINDS)
    ap.add_argument("--output", required=True)
    ap.add_argument("--title", default="")
    ap.add_argument("--xlabel", default="")
    ap.add_argument("--ylabel", default="")
    args = ap.parse_args(argv)
    spec = PlotSpec(
        input_csv=args.input_csv,
        kind=args.kind,
        output=args.output,
        title=args.title,
        xlabel=args.xlabel,
        ylabel=args.ylabel,
    )
    try:
        render(spec)
    except (SchemaError, OSError) as exc:
        print(f"kpzplot: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
