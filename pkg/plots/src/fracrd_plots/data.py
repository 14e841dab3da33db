"""Readers for the solver's snapshot CSV and summary JSON formats.

These parse the documented on-disk formats only; the solver package is not
imported.  Snapshots are CSVs with a header row, coordinate columns (``x``
or ``x,y``) followed by one column per species, rows row-major in the last
axis.  Summaries are JSON documents with ``"schema": 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SUMMARY_SCHEMA = 1
_COORDS = ("x", "y")


@dataclass(frozen=True)
class SnapshotData:
    """A parsed 2-D snapshot: axis coordinates and per-species value grids."""

    path: Path
    x: np.ndarray
    y: np.ndarray
    species: tuple[np.ndarray, ...]  # each of shape (len(x), len(y))

    @property
    def n_species(self) -> int:
        return len(self.species)


def read_snapshot(path) -> SnapshotData:
    """Parse a 2-D snapshot CSV; 1-D files are rejected."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"snapshot not found: {path}")
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    n_coords = sum(1 for name in header if name in _COORDS)
    if n_coords < 2:
        raise ValueError(
            f"{path}: heatmaps need 2-D snapshots (found coordinates "
            f"{header[:n_coords]})"
        )
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: column count does not match header")
    x_col, y_col = data[:, 0], data[:, 1]
    x = np.unique(x_col)
    y = np.unique(y_col)
    if x.size * y.size != data.shape[0]:
        raise ValueError(f"{path}: rows do not form a full tensor grid")
    # Rows are row-major in the last axis: the first block shares one x
    # value while y sweeps through all of its values in order.
    first_block_x = x_col[: y.size]
    first_block_y = y_col[: y.size]
    if not (np.all(first_block_x == first_block_x[0])
            and np.array_equal(first_block_y, y)):
        raise ValueError(f"{path}: unexpected row ordering")
    species = tuple(
        data[:, 2 + i].reshape(x.size, y.size) for i in range(len(header) - 2)
    )
    if not species:
        raise ValueError(f"{path}: no species columns")
    return SnapshotData(path=path, x=x, y=y, species=species)


def read_summary(path) -> dict:
    """Load a summary JSON document, validating the schema version."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"summary not found: {path}")
    with path.open("r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema") != SUMMARY_SCHEMA:
        raise ValueError(f"{path}: unsupported summary schema {doc.get('schema')!r}")
    return doc


def parameter_tag(summary: dict) -> str:
    """Human-readable ``(s1, s2, d1, d2)`` tag from a summary's config echo.

    Supports both the table-cell echo (flat ``params`` mapping) and full run
    configs (``species`` list); returns an empty string when neither is
    present.
    """
    config = summary.get("config", {})
    params = config.get("params")
    if isinstance(params, dict) and {"s1", "s2", "d1", "d2"} <= set(params):
        return (
            f"(s1,s2,d1,d2)=({params['s1']:g},{params['s2']:g},"
            f"{params['d1']:g},{params['d2']:g})"
        )
    species = config.get("species")
    if isinstance(species, list) and species and isinstance(species[0], dict):
        s_vals = ",".join(f"{sp.get('s'):g}" for sp in species if "s" in sp)
        d_vals = ",".join(f"{sp.get('d'):g}" for sp in species if "d" in sp)
        if s_vals and d_vals:
            return f"(s)=({s_vals}) (d)=({d_vals})"
    return ""
