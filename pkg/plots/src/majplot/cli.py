"""``plot`` command: render a propagation CSV into an image.

Usage: ``plot fig1 --in data.csv --out figure.png`` (same for ``fig2``).
Exit codes: 0 success, 2 schema or argument error.
"""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, render
from .schema import SchemaError

EXIT_OK = 0
EXIT_SCHEMA = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plot", description=__doc__)
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind, blurb in (("fig1", "log-scale truncation-error decay"),
                        ("fig2", "hole-density panels per interaction strength")):
        p = sub.add_parser(kind, help=blurb)
        p.add_argument("--in", dest="input_path", required=True, metavar="CSV")
        p.add_argument("--out", dest="output_path", required=True, metavar="IMG")
        p.add_argument("--xlabel")
        p.add_argument("--ylabel")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(args.kind, args.input_path, args.output_path,
                    args.xlabel, args.ylabel)
    try:
        render(spec)
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
