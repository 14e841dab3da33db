"""Heatmap and time-series rendering against synthesized solver files."""

import hashlib
import json

import numpy as np
import pytest

from fracrd_plots import (
    FigureSpec,
    PanelSpec,
    load_figure_spec,
    read_snapshot,
    render_heatmaps,
    render_timeseries,
)

from snapshot_io import write_snapshot, write_summary


class TestReadSnapshot:
    def test_parses_grid_and_species(self, snapshot_pair):
        entry = snapshot_pair[0]
        snap = read_snapshot(entry["snapshot"])
        assert snap.n_species == 2
        assert snap.species[0].shape == (12, 10)
        assert np.allclose(snap.species[1], entry["fields"][1])

    def test_rejects_1d_snapshot(self, tmp_path):
        path = tmp_path / "one_d.csv"
        path.write_text("x,u1\n0.5,1.0\n1.5,2.0\n", encoding="utf-8")
        with pytest.raises(ValueError, match="2-D"):
            read_snapshot(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_snapshot(tmp_path / "absent.csv")


class TestRenderHeatmaps:
    def test_2x2_grid_with_annotations(self, snapshot_pair, tmp_path):
        panels = tuple(
            PanelSpec(
                snapshot=entry["snapshot"],
                species=species,
                title=f"cell {i} u{species + 1}",
                summary=entry["summary"],
            )
            for i, entry in enumerate(snapshot_pair)
            for species in range(2)
        )
        out = tmp_path / "grid.png"
        info = render_heatmaps(FigureSpec(panels=panels, output=out))
        assert out.exists() and out.stat().st_size > 0
        assert len(info) == 4
        for panel in info:
            assert panel.summary_linf is not None
            # Cross-file consistency: annotated max vs summary final norm.
            assert abs(panel.max_value - panel.summary_linf) <= 1e-9

    def test_inputs_untouched(self, snapshot_pair, tmp_path):
        entry = snapshot_pair[0]
        before = hashlib.sha256(entry["snapshot"].read_bytes()).hexdigest()
        render_heatmaps(
            FigureSpec(
                panels=(PanelSpec(entry["snapshot"], 0, "u1"),),
                output=tmp_path / "single.png",
            )
        )
        after = hashlib.sha256(entry["snapshot"].read_bytes()).hexdigest()
        assert before == after

    def test_constant_field_degenerate_range(self, tmp_path):
        x = np.linspace(0, 1, 4)
        y = np.linspace(0, 1, 5)
        path = tmp_path / "const.csv"
        write_snapshot(path, x, y, [np.full((4, 5), 2.5)])
        out = tmp_path / "const.png"
        info = render_heatmaps(
            FigureSpec(panels=(PanelSpec(path, 0, "const"),), output=out)
        )
        assert out.exists() and out.stat().st_size > 0
        assert info[0].max_value == 2.5

    def test_shared_scale(self, snapshot_pair, tmp_path):
        panels = tuple(
            PanelSpec(entry["snapshot"], 0, f"cell {i}")
            for i, entry in enumerate(snapshot_pair)
        )
        out = tmp_path / "shared.png"
        render_heatmaps(FigureSpec(panels=panels, output=out, scale="shared"))
        assert out.exists()

    def test_species_out_of_range(self, snapshot_pair, tmp_path):
        with pytest.raises(ValueError, match="species index"):
            render_heatmaps(
                FigureSpec(
                    panels=(PanelSpec(snapshot_pair[0]["snapshot"], 5, "bad"),),
                    output=tmp_path / "x.png",
                )
            )

    def test_empty_spec_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="at least one"):
            FigureSpec(panels=(), output=tmp_path / "x.png")

    def test_spec_file_round_trip(self, snapshot_pair, tmp_path):
        doc = {
            "output": "fig.png",
            "scale": "per-panel",
            "panels": [
                {
                    "snapshot": str(entry["snapshot"]),
                    "species": 0,
                    "title": f"cell {i}",
                    "summary": str(entry["summary"]),
                }
                for i, entry in enumerate(snapshot_pair)
            ],
        }
        spec_path = tmp_path / "figure.json"
        spec_path.write_text(json.dumps(doc), encoding="utf-8")
        spec = load_figure_spec(spec_path)
        assert spec.output == tmp_path / "fig.png"
        assert len(spec.panels) == 2
        info = render_heatmaps(spec)
        assert (tmp_path / "fig.png").exists()
        assert all(p.summary_linf is not None for p in info)


def _series_summary(path, times, linf_per_species, residual=None):
    n = len(times)
    write_summary(
        path,
        final_linf=[row[-1] for row in linf_per_species],
        params={"s1": 0.5, "s2": 0.5, "d1": 1.0, "d2": 1.0},
        series={
            "times": list(times),
            "linf": [list(col) for col in zip(*linf_per_species)],
            "l2": [list(col) for col in zip(*linf_per_species)],
            "mass": [1.0] * n,
            "steady_residual": residual if residual is not None else [None] + [1.0 / (i + 1) for i in range(n - 1)],
        },
    )


class TestRenderTimeseries:
    def test_residual_curve(self, tmp_path):
        times = np.linspace(0.0, 1.0, 11)
        path = tmp_path / "summary.json"
        _series_summary(path, times, [[1.0] * 11, [2.0] * 11])
        out = tmp_path / "residual.png"
        curves = render_timeseries([path], "residual", out)
        assert out.exists() and out.stat().st_size > 0
        assert len(curves) == 1
        assert curves[0].n_points == 10  # t=0 excluded on the log axis

    def test_constant_series(self, tmp_path):
        times = np.linspace(0.0, 1.0, 6)
        path = tmp_path / "summary.json"
        _series_summary(path, times, [[3.0] * 6, [3.0] * 6])
        out = tmp_path / "linf.png"
        curves = render_timeseries([path], "linf", out)
        assert len(curves) == 2  # one per species

    def test_two_summaries_two_legend_groups(self, tmp_path):
        times = np.linspace(0.0, 1.0, 6)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        _series_summary(a, times, [[1.0] * 6])
        _series_summary(b, times, [[2.0] * 6])
        curves = render_timeseries([a, b], "mass", tmp_path / "mass.png")
        assert len(curves) == 2
        assert curves[0].label != ""

    def test_unknown_quantity(self, tmp_path):
        with pytest.raises(ValueError, match="unknown quantity"):
            render_timeseries([], "entropy", tmp_path / "x.png")

    def test_empty_series_rejected(self, tmp_path):
        path = tmp_path / "empty.json"
        write_summary(path, final_linf=[1.0])
        with pytest.raises(ValueError, match="empty"):
            render_timeseries([path], "linf", tmp_path / "x.png")
