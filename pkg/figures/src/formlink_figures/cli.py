"""Command-line entry point: render the figure described by a JSON spec."""

from __future__ import annotations

import argparse
import sys

from formlink_figures.spec import FigureSpec, SpecError
from formlink_figures.render import render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="formlink-figures",
        description="Render a formlink CSV output into a PNG figure",
    )
    parser.add_argument("--spec", required=True, help="JSON figure specification")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec.from_file(args.spec)
        render(spec)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(spec.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
