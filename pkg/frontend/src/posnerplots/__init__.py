"""Render figures from posnerspin CSV files.

The package talks to the engine only through its documented CSV format:
time-series files with a leading ``t_s`` column and table files with named
columns.  Nothing here computes physics.
"""

from .errors import EmptySeriesError, MissingColumnError, PlotError, SpecError
from .plotspec import KINDS, PlotSpec, load_plotspec, validate
from .render import build_figure, render

__all__ = [
    "EmptySeriesError",
    "KINDS",
    "MissingColumnError",
    "PlotError",
    "PlotSpec",
    "SpecError",
    "build_figure",
    "load_plotspec",
    "render",
    "validate",
]

__version__ = "0.1.0"
