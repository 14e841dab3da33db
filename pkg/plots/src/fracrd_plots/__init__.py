"""Rendering of solver snapshot CSVs and summary JSONs into figures."""

__version__ = "0.1.0"

from .data import SnapshotData, read_snapshot, read_summary
from .figures import (
    CurveInfo,
    FigureSpec,
    PanelInfo,
    PanelSpec,
    QUANTITIES,
    load_figure_spec,
    render_heatmaps,
    render_timeseries,
)

__all__ = [
    "__version__",
    "SnapshotData",
    "read_snapshot",
    "read_summary",
    "FigureSpec",
    "PanelSpec",
    "PanelInfo",
    "CurveInfo",
    "QUANTITIES",
    "load_figure_spec",
    "render_heatmaps",
    "render_timeseries",
]
