"""Error types raised while building or rendering a figure."""


class PlotError(Exception):
    """Base class for all rendering failures."""


class SpecError(PlotError):
    """The plot specification itself is invalid."""


class MissingColumnError(PlotError):
    """A referenced column is absent from a CSV header."""


class EmptySeriesError(PlotError):
    """A CSV has no rows to draw, or no drawable values remain."""
