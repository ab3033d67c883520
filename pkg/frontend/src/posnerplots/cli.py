"""Command-line interface.

``render`` accepts either a TOML spec file (``--spec``) or one flag per
spec field.  Exit codes: 0 success, 2 invalid spec or usage, 1 data errors
(missing column, empty series, unreadable file).  Errors are a single line
on stderr: ``error: <category>: <detail>``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import EmptySeriesError, MissingColumnError, SpecError
from .plotspec import KINDS, PlotSpec, load_plotspec, validate
from .render import render

_FIELD_FLAGS = ("kind", "csv", "columns", "out", "xlabel", "ylabel", "title", "dpi")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posnerspin-plots",
        description="Render figures from posnerspin CSV output",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="draw one figure from CSV input")
    p.add_argument("--spec", help="TOML spec file; exclusive with the field flags")
    p.add_argument("--kind", choices=KINDS, help="figure kind")
    p.add_argument(
        "--csv", action="append", default=None, metavar="PATH", help="input CSV (repeatable)"
    )
    p.add_argument("--columns", help="comma-separated column names")
    p.add_argument("--out", help="image path (.png default, .svg/.pdf for vector)")
    p.add_argument("--xlabel")
    p.add_argument("--ylabel")
    p.add_argument("--title")
    p.add_argument("--dpi", type=int, default=150)
    p.set_defaults(func=_cmd_render)
    return parser


def _spec_from_flags(args: argparse.Namespace) -> PlotSpec:
    if args.kind is None or not args.csv:
        raise SpecError("--kind and at least one --csv are required without --spec")
    out = args.out
    if out is None:
        out = str(Path(args.csv[0]).with_suffix(".png").name)
    columns = ()
    if args.columns is not None:
        columns = tuple(c.strip() for c in args.columns.split(",") if c.strip())
    spec = PlotSpec(
        kind=args.kind,
        csv_paths=tuple(args.csv),
        out_path=out,
        columns=columns,
        xlabel=args.xlabel,
        ylabel=args.ylabel,
        title=args.title,
        dpi=args.dpi,
    )
    validate(spec)
    return spec


def _cmd_render(args: argparse.Namespace) -> int:
    if args.spec is not None:
        given = [
            f"--{name}"
            for name in _FIELD_FLAGS
            if getattr(args, name) not in (None, 150)
        ]
        if given:
            raise SpecError(f"--spec is exclusive with field flags ({', '.join(given)})")
        spec = load_plotspec(args.spec)
    else:
        spec = _spec_from_flags(args)
    print(f"wrote {render(spec)}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: invalid-spec: {exc}", file=sys.stderr)
        return 2
    except MissingColumnError as exc:
        print(f"error: missing-column: {exc}", file=sys.stderr)
        return 1
    except EmptySeriesError as exc:
        print(f"error: empty-series: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
