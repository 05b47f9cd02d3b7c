"""Figure rendering for cvcluster graph exports."""

from .exports import ExportData, SUPPORTED_SCHEMA_VERSION, load_export
from .figures import (
    DEFAULT_COLORS,
    DEFAULT_THICKNESS,
    DEFAULT_THRESHOLD,
    DrawnFigure,
    FigureSpec,
    circular_positions,
    grid_positions,
    ladder_positions,
    main,
    render,
    resolve_layout,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_COLORS",
    "DEFAULT_THICKNESS",
    "DEFAULT_THRESHOLD",
    "DrawnFigure",
    "ExportData",
    "FigureSpec",
    "SUPPORTED_SCHEMA_VERSION",
    "circular_positions",
    "grid_positions",
    "ladder_positions",
    "load_export",
    "main",
    "render",
    "resolve_layout",
]
