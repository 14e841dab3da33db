"""Benchmark the numba hot kernels against their pure-numpy twins.

Usage::

    python benchmarks/bench_kernels.py [--size N] [--repeats R]

Sizes default to the Table-1 working set (199*199 nodes).  On top of the
per-kernel comparison the script times a full stepping loop through the
public API; rerun with ``FRACRD_PURE_NUMPY=1`` to see the end-to-end effect
of the fallback path (kernel selection is fixed at import time).
"""

import argparse
import time

import numpy as np

from fracrd import accel
from fracrd import kernels
from fracrd.tables import TABLES, cell_config
from fracrd.stepper import _Stepper, initial_state


def best_of(fn, repeats):
    timings = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        timings.append(time.perf_counter() - start)
    return min(timings)


def compare(name, numpy_fn, numba_fn, repeats):
    t_np = best_of(numpy_fn, repeats)
    if numba_fn is None:
        print(f"{name:28s} numpy {t_np * 1e3:8.3f} ms   (numba unavailable)")
        return
    numba_fn()  # compile outside the timed region
    t_nb = best_of(numba_fn, repeats)
    print(
        f"{name:28s} numpy {t_np * 1e3:8.3f} ms   numba {t_nb * 1e3:8.3f} ms   "
        f"speedup x{t_np / t_nb:5.2f}"
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=199 * 199)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--steps", type=int, default=50,
                        help="steps for the end-to-end loop")
    args = parser.parse_args()

    n = args.size
    rng = np.random.default_rng(0)
    u1 = rng.uniform(0.0, 1.0, n)
    u2 = rng.uniform(0.0, 1.0, n)
    u3 = rng.uniform(0.0, 1.0, n)
    fk = rng.standard_normal(n)
    inv_denom = 1.0 / (1.0 + rng.uniform(0.0, 10.0, n))

    have_numba = accel.NUMBA_AVAILABLE
    print(f"array size {n}, best of {args.repeats} "
          f"(selected path: {'numba' if accel.NUMBA_ENABLED else 'numpy'})\n")
    compare(
        "brusselator_rhs",
        lambda: kernels.brusselator_rhs_numpy(u1, u2, 2.0, 1.0),
        (lambda: kernels.brusselator_rhs_numba(u1, u2, 2.0, 1.0)) if have_numba else None,
        args.repeats,
    )
    compare(
        "reversible_rhs",
        lambda: kernels.reversible_rhs_numpy(u1, u2, u3, 1.0, 1.0, 2.0, False, False, False),
        (lambda: kernels.reversible_rhs_numba(u1, u2, u3, 1.0, 1.0, 2.0, False, False, False))
        if have_numba else None,
        args.repeats,
    )
    compare(
        "implicit_mode_update",
        lambda: kernels.implicit_mode_update_numpy(u1, fk, 0.01, inv_denom),
        (lambda: kernels.implicit_mode_update_numba(u1, fk, 0.01, inv_denom))
        if have_numba else None,
        args.repeats,
    )
    compare(
        "max_abs_diff",
        lambda: kernels.max_abs_diff_numpy(u1, u2),
        (lambda: kernels.max_abs_diff_numba(u1, u2)) if have_numba else None,
        args.repeats,
    )

    # End-to-end: Table-1 block-1 cell stepped a fixed number of times.
    config = cell_config(TABLES["T1"][0], 1e-2, depth=1)
    stepper = _Stepper(config)
    state = initial_state(config)
    coeffs = [c.coeffs for c in state.coeffs]
    values = [f.values for f in state.fields]
    start = time.perf_counter()
    for step_index in range(args.steps):
        coeffs, values, _, _ = stepper.advance(
            coeffs, values, (step_index + 1) * config.h_t, step_index + 1
        )
    elapsed = time.perf_counter() - start
    print(
        f"\nend-to-end {args.steps} steps on {config.grid.shape} grid: "
        f"{elapsed:.3f}s ({elapsed / args.steps * 1e3:.1f} ms/step) "
        f"[{'numba' if accel.NUMBA_ENABLED else 'numpy'} path; "
        f"flip with {accel.ENV_FLAG}=1]"
    )


if __name__ == "__main__":
    main()
