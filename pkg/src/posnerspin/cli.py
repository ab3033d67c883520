"""Command-line interface.

Exit codes: 0 success, 2 unknown preset, 3 invalid configuration,
4 dimension-guard violation, 1 any other engine failure.  Errors are a
single machine-parsable line on stderr: ``error: <category>: <detail>``.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from ._version import __version__
from .config import apply_overrides, load_config_file, parse_tree, to_tree
from .errors import (
    ConfigError,
    DimensionGuardError,
    PosnerSpinError,
    UnknownPresetError,
)
from .experiments import PRESETS, preset_variants, run_variants, sweep

_ENV_OUTDIR = "POSNERSPIN_OUT"


def _outdir(args: argparse.Namespace) -> Path:
    if args.out is not None:
        return Path(args.out)
    return Path(os.environ.get(_ENV_OUTDIR, "out"))


def _add_common(p: argparse.ArgumentParser) -> None:
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", help="name from the preset registry")
    source.add_argument("--config", help="path to a TOML configuration file")
    p.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override one configuration value (TOML syntax, repeatable)",
    )
    p.add_argument("--out", help=f"output directory (default ${_ENV_OUTDIR} or ./out)")
    p.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        help="parallel variant runs (default: available cores)",
    )


def _collect(args: argparse.Namespace) -> list[tuple[str, str | None, str | None, object]]:
    """Resolve preset/config plus overrides into named runnable items."""
    items = []
    if args.preset is not None:
        for variant, cfg in preset_variants(args.preset):
            tree = apply_overrides(to_tree(cfg), args.overrides)
            cfg = parse_tree(tree)
            run_name = args.preset if variant is None else f"{args.preset}__{variant}"
            items.append((run_name, args.preset, variant, cfg))
    else:
        tree = apply_overrides(load_config_file(args.config), args.overrides)
        cfg = parse_tree(tree)
        items.append((Path(args.config).stem, None, None, cfg))
    return items


def _cmd_run(args: argparse.Namespace) -> int:
    written = run_variants(_collect(args), _outdir(args), jobs=args.jobs)
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    items = _collect(args)
    if len(items) != 1:
        raise ConfigError(
            "sweep needs a single-variant source; this preset already has variants"
        )
    base_name, preset, _, cfg = items[0]
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--values must be comma-separated numbers, got {args.values!r}")
    swept = [
        (f"{base_name}__{tag}", preset, tag, variant)
        for tag, variant in sweep(cfg, args.param, values)
    ]
    written = run_variants(swept, _outdir(args), jobs=args.jobs)
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_list_presets(args: argparse.Namespace) -> int:
    for name in sorted(PRESETS):
        print(f"{name}: {PRESETS[name].description}")
    return 0


def _cmd_relaxation(args: argparse.Namespace) -> int:
    from .relaxation import isotope_comparison

    case6, case7, ratio = isotope_comparison(
        b0_tesla=args.b0, j7_hz=args.j7, tau6_s=args.tau6, tau7_s=args.tau7
    )
    for case in (case6, case7):
        print(
            f"{case.isotope}: J={case.j_hz:g} Hz tau={case.tau_s:g} s "
            f"rate={case.rate_per_s:.6e} 1/s lifetime={case.lifetime_s:.6e} s"
        )
    print(f"lifetime ratio 6Li/7Li: {ratio:.6e}")
    return 0


def _cmd_spectrum(args: argparse.Namespace) -> int:
    from .config import ExperimentConfig
    from .experiments import run_to_files

    cfg = ExperimentConfig(
        doping=args.doping,
        topology=args.topology,
        j_scale=args.scale,
        b0_tesla=args.b0,
        alpha=args.alpha,
        tol_degeneracy=args.tol,
        quantities=("transition_spectrum",),
    )
    from .config import validate

    validate(cfg)
    for path in run_to_files(cfg, "spectrum", _outdir(args)):
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posnerspin",
        description="Nuclear-spin dynamics of entangled molecular clusters",
    )
    parser.add_argument("--version", action="version", version=f"posnerspin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a preset or a config file")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a config across parameter values")
    _add_common(p_sweep)
    p_sweep.add_argument("--param", required=True, choices=("J_scale", "B0"))
    p_sweep.add_argument("--values", required=True, help="comma-separated numbers")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_list = sub.add_parser("list-presets", help="show the preset registry")
    p_list.set_defaults(func=_cmd_list_presets)

    p_relax = sub.add_parser("relaxation", help="print the isotope lifetime table")
    p_relax.add_argument("--b0", type=float, default=50e-6, help="field in tesla")
    p_relax.add_argument("--j7", type=float, default=1.0, help="7Li coupling in Hz")
    p_relax.add_argument("--tau6", type=float, default=300.0, help="6Li correlation time in s")
    p_relax.add_argument("--tau7", type=float, default=10.0, help="7Li correlation time in s")
    p_relax.set_defaults(func=_cmd_relaxation)

    p_spec = sub.add_parser("spectrum", help="write the transition-frequency table")
    p_spec.add_argument("--doping", default="none", choices=("none", "Li6", "Li7"))
    p_spec.add_argument(
        "--topology",
        default="symmetric",
        choices=("symmetric", "weak_asymmetry", "strong_asymmetry", "none"),
    )
    p_spec.add_argument("--scale", type=float, default=1.0)
    p_spec.add_argument("--b0", type=float, default=50e-6)
    p_spec.add_argument("--alpha", type=float, default=1.0)
    p_spec.add_argument("--tol", type=float, default=1e-6)
    p_spec.add_argument("--out", help=f"output directory (default ${_ENV_OUTDIR} or ./out)")
    p_spec.set_defaults(func=_cmd_spectrum)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnknownPresetError as exc:
        print(f"error: unknown-preset: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: invalid-config: {exc}", file=sys.stderr)
        return 3
    except DimensionGuardError as exc:
        print(f"error: dimension-guard: {exc}", file=sys.stderr)
        return 4
    except PosnerSpinError as exc:
        print(f"error: engine: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
