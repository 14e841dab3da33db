"""CLI behavior plus the end-to-end figure reproduction gate.

The integration test drives the solver through its own command line (the
only coupling between the two packages is the files it writes), renders the
four fast-budget steady-state snapshots into a 2x2 grid, and checks the
annotated maxima against the summaries.
"""

import json
import shutil
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from fracrd_plots import FigureSpec, PanelSpec, read_summary, render_heatmaps

from snapshot_io import write_summary


def run_plots_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "fracrd_plots.cli", *args],
        capture_output=True,
        text=True,
    )


class TestCli:
    def test_heatmap_subcommand(self, snapshot_pair, tmp_path):
        doc = {
            "output": str(tmp_path / "cli.png"),
            "panels": [
                {"snapshot": str(e["snapshot"]), "species": 0, "title": f"c{i}"}
                for i, e in enumerate(snapshot_pair)
            ],
        }
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps(doc), encoding="utf-8")
        proc = run_plots_cli("heatmap", "--spec", str(spec))
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "cli.png").exists()
        assert "2 panels" in proc.stdout

    def test_series_subcommand(self, tmp_path):
        times = np.linspace(0.0, 1.0, 6)
        summ = tmp_path / "s.json"
        write_summary(
            summ,
            final_linf=[1.0],
            series={
                "times": list(times),
                "linf": [[1.0]] * 6,
                "l2": [[1.0]] * 6,
                "mass": [1.0] * 6,
                "steady_residual": [None, 1, 0.5, 0.2, 0.1, 0.05],
            },
        )
        out = tmp_path / "series.png"
        proc = run_plots_cli(
            "series", "--summaries", str(summ), "--quantity", "linf",
            "--out", str(out),
        )
        assert proc.returncode == 0, proc.stderr
        assert out.exists()

    def test_bad_spec_exits_nonzero(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"panels": []}), encoding="utf-8")
        proc = run_plots_cli("heatmap", "--spec", str(spec))
        assert proc.returncode == 2
        assert "error" in proc.stderr


def solver_available() -> bool:
    if shutil.which("fracrd"):
        return True
    probe = subprocess.run(
        [sys.executable, "-c", "import fracrd.cli"], capture_output=True
    )
    return probe.returncode == 0


@pytest.fixture(scope="module")
def table_outputs(tmp_path_factory):
    out = tmp_path_factory.mktemp("t1_fast")
    proc = subprocess.run(
        [sys.executable, "-m", "fracrd.cli", "reproduce", "T1",
         "--budget", "fast", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    cells = sorted((out / "T1").iterdir())
    assert len(cells) == 2
    return cells


@pytest.mark.skipif(
    not solver_available(), reason="solver CLI not installed in this environment"
)
class TestFigureReproduction:

    def test_four_panel_grid_matches_summaries(self, table_outputs, tmp_path):
        panels = []
        for cell_dir in table_outputs:
            for species in range(2):
                panels.append(
                    PanelSpec(
                        snapshot=cell_dir / "snapshot_final.csv",
                        species=species,
                        title=f"{cell_dir.name} u{species + 1}",
                        summary=cell_dir / "summary.json",
                    )
                )
        out = tmp_path / "figure_grid.png"
        start = time.perf_counter()
        info = render_heatmaps(FigureSpec(panels=tuple(panels), output=out))
        elapsed = time.perf_counter() - start
        assert out.exists() and out.stat().st_size > 0
        assert len(info) == 4  # 2x2 grid
        for panel in info:
            assert panel.summary_linf is not None
            assert abs(panel.max_value - panel.summary_linf) <= 1e-9
        assert elapsed < 10.0, f"rendering took {elapsed:.1f}s"
        print(
            f"figure reproduction: 4 panels in {elapsed:.2f}s; annotated maxima "
            + ", ".join(f"{p.max_value:.9g}" for p in info)
        )

    def test_residual_series_from_real_run(self, table_outputs, tmp_path):
        summary_path = table_outputs[0] / "summary.json"
        doc = read_summary(summary_path)
        residuals = [
            v for v in doc["series"]["steady_residual"] if v is not None
        ]
        assert residuals == sorted(residuals, reverse=True)  # monotone decrease
        from fracrd_plots import render_timeseries

        out = tmp_path / "residual.png"
        curves = render_timeseries([summary_path], "residual", out)
        assert out.exists()
        assert curves[0].n_points > 3
