"""Plotting companion for chirp-modulation FER sweep CSVs."""

from .plotting import (
    AXIS_LABELS,
    FIGURE_KINDS,
    PARAMETER_COLUMNS,
    REQUIRED_COLUMNS,
    ZERO_FER_NOTE,
    Curve,
    PlotError,
    PlotSpec,
    build_curves,
    read_rows,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "AXIS_LABELS",
    "FIGURE_KINDS",
    "PARAMETER_COLUMNS",
    "REQUIRED_COLUMNS",
    "ZERO_FER_NOTE",
    "Curve",
    "PlotError",
    "PlotSpec",
    "build_curves",
    "read_rows",
    "render",
    "__version__",
]
