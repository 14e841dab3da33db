"""Test helpers emitting the solver's documented file formats."""

import json


def write_snapshot(path, x, y, species):
    """Emit the solver's snapshot CSV format (y varies fastest)."""
    names = [f"u{i + 1}" for i in range(len(species))]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,y," + ",".join(names) + "\n")
        for i, xv in enumerate(x):
            for j, yv in enumerate(y):
                row = [xv, yv] + [s[i, j] for s in species]
                fh.write(",".join(format(float(v), ".17g") for v in row) + "\n")


def write_summary(path, final_linf, params=None, series=None):
    """Emit a minimal schema-1 summary document."""
    doc = {
        "schema": 1,
        "config": {"params": params or {}},
        "final_linf": list(final_linf),
        "series": series
        or {
            "times": [],
            "linf": [],
            "l2": [],
            "mass": [],
            "steady_residual": [],
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
