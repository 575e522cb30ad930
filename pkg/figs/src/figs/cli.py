"""figs <figure-id> --in <csv...> --out <image>"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .render import RENDERERS, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figs", description="Render preset figures from sauterpair CSV outputs"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("figure_id", choices=sorted(RENDERERS), help="which preset figure")
    parser.add_argument(
        "--in", dest="inputs", nargs="+", required=True, metavar="CSV", help="input CSV file(s)"
    )
    parser.add_argument("--out", required=True, metavar="IMAGE", help="output image path")
    parser.add_argument(
        "--well-width", type=float, default=None,
        help="well width D in a.u. for boundary markers (density figure)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        render(args.figure_id, args.inputs, args.out, well_width=args.well_width)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{args.figure_id} -> {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
