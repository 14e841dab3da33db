import numpy as np
import pytest

from snapshot_io import write_snapshot, write_summary


@pytest.fixture
def snapshot_pair(tmp_path):
    """Two 2-species snapshots with paired summaries, as a table run writes."""
    rng = np.random.default_rng(3)
    x = np.linspace(-0.99, 0.99, 12)
    y = np.linspace(-0.99, 0.99, 10)
    entries = []
    for cell in range(2):
        fields = [
            np.abs(rng.standard_normal((12, 10))) * (0.1 + 0.2 * cell)
            for _ in range(2)
        ]
        snap = tmp_path / f"cell{cell}_snapshot.csv"
        summ = tmp_path / f"cell{cell}_summary.json"
        write_snapshot(snap, x, y, fields)
        write_summary(
            summ,
            final_linf=[float(np.max(np.abs(f))) for f in fields],
            params={"s1": 0.25, "s2": 0.75, "d1": 3.0, "d2": 5.0},
        )
        entries.append({"snapshot": snap, "summary": summ, "fields": fields})
    return entries
