"""Heatmap panels and time-series figures from solver output files.

Rendering is read-only and deterministic for fixed inputs: panel order
follows the spec file, layout and color mapping are fixed, and every
figure-affecting number is taken from the input files.  Each renderer also
returns the quantities it drew (panel maxima, series lengths) so callers
and tests can cross-check them against the paired summaries without
scraping pixels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")  # batch tool: render off-screen everywhere

import matplotlib.pyplot as plt
import numpy as np

from .data import parameter_tag, read_snapshot, read_summary

QUANTITIES = ("linf", "l2", "mass", "residual")


@dataclass(frozen=True)
class PanelSpec:
    snapshot: Path
    species: int
    title: str
    summary: Optional[Path] = None


@dataclass(frozen=True)
class FigureSpec:
    """Heatmap figure description: ordered panels plus output settings."""

    panels: tuple[PanelSpec, ...]
    output: Path
    scale: str = "per-panel"  # or "shared"

    def __post_init__(self) -> None:
        if not self.panels:
            raise ValueError("figure spec needs at least one panel")
        if self.scale not in ("per-panel", "shared"):
            raise ValueError(f"unknown color scale '{self.scale}'")


def load_figure_spec(path) -> FigureSpec:
    """Read a JSON figure spec (panels, output path, color-scale mode)."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        doc = json.load(fh)
    base = path.parent

    def resolve(p):
        p = Path(p)
        return p if p.is_absolute() else base / p

    panels = []
    for i, entry in enumerate(doc.get("panels", [])):
        if "snapshot" not in entry:
            raise ValueError(f"panel {i}: missing 'snapshot'")
        panels.append(
            PanelSpec(
                snapshot=resolve(entry["snapshot"]),
                species=int(entry.get("species", 0)),
                title=str(entry.get("title", f"panel {i + 1}")),
                summary=resolve(entry["summary"]) if entry.get("summary") else None,
            )
        )
    if "output" not in doc:
        raise ValueError("figure spec: missing 'output'")
    return FigureSpec(
        panels=tuple(panels),
        output=resolve(doc["output"]),
        scale=doc.get("scale", "per-panel"),
    )


@dataclass(frozen=True)
class PanelInfo:
    """What was drawn on one panel; ``max_value`` is the annotated maximum."""

    title: str
    snapshot: Path
    species: int
    max_value: float
    summary_linf: Optional[float] = None


def render_heatmaps(spec: FigureSpec) -> list[PanelInfo]:
    """Render the panel grid to ``spec.output``; returns per-panel metadata."""
    panels = spec.panels
    n = len(panels)
    n_cols = math.ceil(math.sqrt(n))
    n_rows = math.ceil(n / n_cols)

    loaded = []
    for panel in panels:
        snap = read_snapshot(panel.snapshot)
        if not (0 <= panel.species < snap.n_species):
            raise ValueError(
                f"{panel.snapshot}: species index {panel.species} out of range "
                f"(file has {snap.n_species})"
            )
        values = snap.species[panel.species]
        summary_doc = read_summary(panel.summary) if panel.summary else None
        loaded.append((panel, snap, values, summary_doc))

    if spec.scale == "shared":
        vmin = min(float(v.min()) for _, _, v, _ in loaded)
        vmax = max(float(v.max()) for _, _, v, _ in loaded)

    fig, axes = plt.subplots(
        n_rows, n_cols, figsize=(4.2 * n_cols, 3.6 * n_rows), squeeze=False
    )
    info: list[PanelInfo] = []
    for index, (panel, snap, values, summary_doc) in enumerate(loaded):
        ax = axes[index // n_cols][index % n_cols]
        if spec.scale == "per-panel":
            vmin, vmax = float(values.min()), float(values.max())
        lo, hi = vmin, vmax
        if hi - lo == 0.0:
            # Degenerate (constant) range: widen so the color bar is valid.
            eps = max(abs(hi), 1.0) * 1e-12
            lo, hi = lo - eps, hi + eps
        mesh = ax.pcolormesh(
            snap.x, snap.y, values.T, shading="nearest",
            cmap="viridis", vmin=lo, vmax=hi,
        )
        fig.colorbar(mesh, ax=ax)
        title = panel.title
        if summary_doc is not None:
            tag = parameter_tag(summary_doc)
            if tag:
                title = f"{title}  {tag}"
        ax.set_title(title, fontsize=9)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        max_value = float(np.max(values))
        ax.text(
            0.02, 0.02, f"max={max_value:.9g}",
            transform=ax.transAxes, fontsize=8, color="white",
            bbox={"facecolor": "black", "alpha": 0.5, "pad": 2},
        )
        summary_linf = None
        if summary_doc is not None:
            final = summary_doc.get("final_linf")
            if isinstance(final, list) and panel.species < len(final):
                summary_linf = float(final[panel.species])
        info.append(
            PanelInfo(
                title=panel.title,
                snapshot=panel.snapshot,
                species=panel.species,
                max_value=max_value,
                summary_linf=summary_linf,
            )
        )
    for index in range(n, n_rows * n_cols):
        axes[index // n_cols][index % n_cols].set_axis_off()

    fig.tight_layout()
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output, dpi=130)
    plt.close(fig)
    return info


_SERIES_KEYS = {
    "linf": ("linf", True),
    "l2": ("l2", True),
    "mass": ("mass", False),
    "residual": ("steady_residual", False),
}


@dataclass(frozen=True)
class CurveInfo:
    label: str
    n_points: int


def render_timeseries(
    summary_paths: Sequence, quantity: str, output
) -> list[CurveInfo]:
    """Log-x time plot of the named series from one or more summaries."""
    if quantity not in QUANTITIES:
        raise ValueError(
            f"unknown quantity '{quantity}' (choose from {', '.join(QUANTITIES)})"
        )
    key, per_species = _SERIES_KEYS[quantity]
    output = Path(output)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    curves: list[CurveInfo] = []
    for path in summary_paths:
        doc = read_summary(path)
        series = doc.get("series", {})
        times = np.asarray(series.get("times", []), dtype=float)
        raw = series.get(key, [])
        if len(raw) == 0 or times.size == 0:
            raise ValueError(f"{path}: series '{quantity}' is empty")
        tag = parameter_tag(doc) or Path(path).stem
        if per_species:
            table = np.asarray(raw, dtype=float)  # (time, species)
            for i in range(table.shape[1]):
                label = f"{tag} u{i + 1}"
                mask = times > 0
                ax.plot(times[mask], table[mask, i], label=label)
                curves.append(CurveInfo(label=label, n_points=int(mask.sum())))
        else:
            values = np.asarray(
                [np.nan if v is None else v for v in raw], dtype=float
            )
            mask = (times > 0) & np.isfinite(values)
            ax.plot(times[mask], values[mask], label=tag)
            curves.append(CurveInfo(label=tag, n_points=int(mask.sum())))
    ax.set_xscale("log")
    if quantity == "residual":
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel(quantity)
    ax.legend(fontsize=8)
    fig.tight_layout()
    output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(output, dpi=130)
    plt.close(fig)
    return curves
