"""Turn a validated plot spec into an image file.

Inputs are read-only; the image is a pure function of the CSV bytes and the
spec.  The figure is assembled with matplotlib's object API so no global
pyplot state is touched.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
from matplotlib.figure import Figure

from .errors import EmptySeriesError, MissingColumnError
from .plotspec import SPECTRUM_COLUMNS, TIME_COLUMN, PlotSpec, validate

FIGSIZE = (8.0, 4.5)


def _read_csv(path: str) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path)
    except pd.errors.EmptyDataError:
        raise EmptySeriesError(f"{path} has no header or data") from None
    if frame.shape[0] == 0:
        raise EmptySeriesError(f"{path} has a header but no data rows")
    return frame


def _column(frame: pd.DataFrame, name: str, path: str) -> np.ndarray:
    if name not in frame.columns:
        available = ", ".join(frame.columns)
        raise MissingColumnError(
            f"column {name!r} not found in {path} (available: {available})"
        )
    return frame[name].to_numpy()


def _finish_axes(ax, spec: PlotSpec, default_xlabel: str, default_ylabel: str) -> None:
    ax.set_xlabel(spec.xlabel if spec.xlabel is not None else default_xlabel)
    ax.set_ylabel(spec.ylabel if spec.ylabel is not None else default_ylabel)
    if spec.title is not None:
        ax.set_title(spec.title)
    ax.legend()


def _draw_timeseries(ax, spec: PlotSpec) -> None:
    path = spec.csv_paths[0]
    frame = _read_csv(path)
    times = _column(frame, TIME_COLUMN, path)
    names = spec.columns or tuple(c for c in frame.columns if c != TIME_COLUMN)
    if not names:
        raise EmptySeriesError(f"{path} has no value columns besides {TIME_COLUMN!r}")
    for name in names:
        ax.plot(times, _column(frame, name, path), label=name)
    _finish_axes(ax, spec, "t (s)", "value")


def _draw_overlay(ax, spec: PlotSpec) -> None:
    # Overlaid files share column names, so legend entries carry the file
    # stem as prefix to keep the curves distinguishable.
    for path in spec.csv_paths:
        frame = _read_csv(path)
        times = _column(frame, TIME_COLUMN, path)
        stem = Path(path).stem
        for name in spec.columns:
            ax.plot(times, _column(frame, name, path), label=f"{stem}: {name}")
    _finish_axes(ax, spec, "t (s)", spec.columns[0])


def _draw_spectrum(ax, spec: PlotSpec) -> None:
    path = spec.csv_paths[0]
    frame = _read_csv(path)
    x_name, y_name = spec.columns or SPECTRUM_COLUMNS
    x = np.asarray(_column(frame, x_name, path), dtype=float)
    y = np.asarray(_column(frame, y_name, path), dtype=float)
    # A log axis cannot display zero, so only strictly positive frequencies
    # are drawn.
    mask = x > 0.0
    if not mask.any():
        raise EmptySeriesError(
            f"{path} has no positive {x_name!r} values to place on a log axis"
        )
    ax.stem(x[mask], y[mask], label=y_name)
    ax.set_xscale("log")
    _finish_axes(ax, spec, x_name, y_name)


_DRAW = {
    "timeseries": _draw_timeseries,
    "overlay": _draw_overlay,
    "spectrum": _draw_spectrum,
}


def build_figure(spec: PlotSpec) -> Figure:
    """Validate the spec, read the CSVs and return the assembled figure."""
    validate(spec)
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    _DRAW[spec.kind](ax, spec)
    return fig


def render(spec: PlotSpec) -> Path:
    """Write the figure for ``spec`` and return the image path.

    Nothing is written unless every CSV parsed and every referenced column
    existed.
    """
    fig = build_figure(spec)
    out = Path(spec.out_path)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=spec.dpi)
    return out
