"""Snapshot CSV and run-summary JSON writers/readers.

Snapshot format: UTF-8 CSV with a header row, one coordinate column per
axis followed by one column per species, one row per node, row-major in the
last axis (in 2-D: y varies fastest).  Numbers are rendered with 17
significant digits so float64 values round-trip exactly and files are
bit-identical across runs of identical configs.

Summary format: a single JSON document, schema-versioned (``"schema": 1``),
holding the config echo, the recorded series, check reports and wall-clock.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .spectral import Grid, ScalarField
from .stepper import RunSummary

SUMMARY_SCHEMA = 1
_COORD_NAMES = ("x", "y")


def _format(value: float) -> str:
    return format(float(value), ".17g")


def write_snapshot(grid: Grid, fields: Sequence[np.ndarray], path) -> None:
    """Write species fields sampled on ``grid`` to a snapshot CSV."""
    arrays = [np.asarray(f.values if isinstance(f, ScalarField) else f, dtype=float)
              for f in fields]
    for arr in arrays:
        if arr.shape != grid.shape:
            raise ValueError(f"field shape {arr.shape} does not match grid {grid.shape}")
    mesh = grid.coordinate_mesh()
    columns = [axis.ravel() for axis in mesh] + [arr.ravel() for arr in arrays]
    header = list(_COORD_NAMES[: grid.domain.dim]) + [
        f"u{i + 1}" for i in range(len(arrays))
    ]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_format(v) for v in row) + "\n")


def read_snapshot(path, grid: Optional[Grid] = None):
    """Read a snapshot CSV; returns ``(header, columns)`` as arrays.

    When ``grid`` is given the species columns are reshaped to the grid and
    the row count is validated.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: {data.shape[1]} columns but {len(header)} names")
    columns = {name: data[:, i] for i, name in enumerate(header)}
    if grid is not None:
        expected = int(np.prod(grid.shape))
        if data.shape[0] != expected:
            raise ValueError(
                f"{path}: {data.shape[0]} rows but grid has {expected} nodes"
            )
        n_coords = grid.domain.dim
        species = {}
        for name in header[n_coords:]:
            species[name] = columns[name].reshape(grid.shape)
        return header, species
    return header, columns


def load_field_from_csv(path, grid: Grid, species_index: int = 0) -> ScalarField:
    """Load one species column of a snapshot CSV as an initial condition."""
    header, species = read_snapshot(path, grid)
    names = header[grid.domain.dim:]
    if not (0 <= species_index < len(names)):
        raise ValueError(
            f"{path}: species index {species_index} out of range (file has {len(names)})"
        )
    return ScalarField(grid, species[names[species_index]])


def _as_jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {k: _as_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_as_jsonable(v) for v in value]
    if isinstance(value, float) and value != value:
        return None
    return value


def write_summary(
    summary: RunSummary,
    reports: Sequence,
    path,
    config_echo: Optional[dict] = None,
) -> None:
    """Write the versioned run-summary JSON document."""
    doc = {
        "schema": SUMMARY_SCHEMA,
        "config": config_echo or {},
        "final_time": summary.final_time,
        "steps_taken": summary.steps_taken,
        "stop_reason": summary.stop_reason,
        "final_linf": summary.final_linf,
        "final_l2": summary.final_l2,
        "min_over_run": summary.min_over_run,
        "mass_weights": summary.mass_weights,
        "series": {
            "times": summary.times,
            "linf": summary.linf,
            "l2": summary.l2,
            "min_value": summary.min_value,
            "mass": summary.mass,
            "steady_residual": summary.steady_residual,
            "fixed_point_residuals": summary.fixed_point_residuals,
        },
        "checks": [
            report.to_dict() if hasattr(report, "to_dict") else report
            for report in reports
        ],
        "wall_clock": summary.wall_clock,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        json.dump(_as_jsonable(doc), fh, indent=2)
        fh.write("\n")


def read_summary(path) -> dict:
    """Load a run-summary JSON document, validating the schema version."""
    with Path(path).open("r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema") != SUMMARY_SCHEMA:
        raise ValueError(
            f"{path}: unsupported summary schema {doc.get('schema')!r}"
        )
    return doc
