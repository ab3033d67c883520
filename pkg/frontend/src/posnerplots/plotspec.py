"""Plot specification: what to draw, from which files, to which image."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import SpecError

KINDS = ("timeseries", "overlay", "spectrum")

#: Image formats accepted for the output path; PNG is the lossless raster
#: default, SVG and PDF are the vector options.
FORMATS = (".png", ".svg", ".pdf")

#: Leading column of every engine time-series CSV.
TIME_COLUMN = "t_s"

#: Default x/y columns for spectrum tables.
SPECTRUM_COLUMNS = ("omega_rad_s", "frobenius_norm")


@dataclass(frozen=True)
class PlotSpec:
    """One figure: input CSVs, kind, column selection, labels, output path.

    ``columns`` semantics depend on ``kind``: for ``timeseries`` they are the
    value columns to draw (default: every column except the time column); for
    ``overlay`` they are required and each must exist in every CSV; for
    ``spectrum`` they are the (frequency, weight) pair and default to
    :data:`SPECTRUM_COLUMNS`.
    """

    kind: str
    csv_paths: tuple[str, ...]
    out_path: str
    columns: tuple[str, ...] = ()
    xlabel: str | None = None
    ylabel: str | None = None
    title: str | None = None
    dpi: int = 150


def validate(spec: PlotSpec) -> None:
    """Raise :class:`SpecError` unless the spec is internally consistent."""
    if spec.kind not in KINDS:
        raise SpecError(f"kind must be one of {KINDS}, got {spec.kind!r}")
    if not spec.csv_paths:
        raise SpecError("at least one input CSV is required")
    if spec.kind in ("timeseries", "spectrum") and len(spec.csv_paths) != 1:
        raise SpecError(f"kind {spec.kind!r} takes exactly one CSV, got {len(spec.csv_paths)}")
    if spec.kind == "overlay":
        if len(spec.csv_paths) < 2:
            raise SpecError("overlay needs at least two CSVs; use timeseries for one")
        if not spec.columns:
            raise SpecError("overlay requires an explicit column selection")
    if spec.kind == "spectrum" and spec.columns and len(spec.columns) != 2:
        raise SpecError(
            "spectrum takes exactly two columns (frequency, weight), "
            f"got {len(spec.columns)}"
        )
    suffix = Path(spec.out_path).suffix.lower()
    if suffix not in FORMATS:
        raise SpecError(f"output path must end with one of {FORMATS}, got {spec.out_path!r}")
    if not isinstance(spec.dpi, int) or spec.dpi <= 0:
        raise SpecError(f"dpi must be a positive integer, got {spec.dpi!r}")


_STRING_KEYS = ("kind", "out", "xlabel", "ylabel", "title")


def _as_tuple(value, key: str) -> tuple[str, ...]:
    if isinstance(value, str):
        return (value,)
    if isinstance(value, list) and all(isinstance(v, str) for v in value):
        return tuple(value)
    raise SpecError(f"{key} must be a string or a list of strings, got {value!r}")


def spec_from_mapping(tree: dict) -> PlotSpec:
    """Build a validated spec from TOML-shaped keys."""
    known = set(_STRING_KEYS) | {"csv", "columns", "dpi"}
    unknown = sorted(set(tree) - known)
    if unknown:
        raise SpecError(f"unknown keys: {', '.join(unknown)}")
    for key in ("kind", "csv", "out"):
        if key not in tree:
            raise SpecError(f"missing required key {key!r}")
    for key in _STRING_KEYS:
        if key in tree and not isinstance(tree[key], str):
            raise SpecError(f"{key} must be a string, got {tree[key]!r}")
    dpi = tree.get("dpi", 150)
    if isinstance(dpi, bool) or not isinstance(dpi, int):
        raise SpecError(f"dpi must be an integer, got {dpi!r}")
    spec = PlotSpec(
        kind=tree["kind"],
        csv_paths=_as_tuple(tree["csv"], "csv"),
        out_path=tree["out"],
        columns=_as_tuple(tree["columns"], "columns") if "columns" in tree else (),
        xlabel=tree.get("xlabel"),
        ylabel=tree.get("ylabel"),
        title=tree.get("title"),
        dpi=dpi,
    )
    validate(spec)
    return spec


def load_plotspec(path: str | Path) -> PlotSpec:
    """Parse a TOML spec file into a validated :class:`PlotSpec`."""
    try:
        with open(path, "rb") as fh:
            tree = tomllib.load(fh)
    except FileNotFoundError:
        raise SpecError(f"spec file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"spec file {path} is not valid TOML: {exc}") from None
    return spec_from_mapping(tree)
