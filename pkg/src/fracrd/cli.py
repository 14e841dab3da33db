"""Command-line front end.

Subcommands:

* ``run CONFIG``        integrate a configured system, write snapshots and
                        the summary JSON, run the configured checks;
* ``check CONFIG``      run only the structural reaction checks;
* ``reproduce T1|T2``   rerun the published steady-state norm tables;
* ``convergence``       first-order-in-time study against the exact
                        semigroup solution of the linear problem.

Exit code is 0 iff every requested verdict passed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import interpolation_check, stroock_varopoulos_check
from .config import ConfigError, parse_config
from .io import write_snapshot, write_summary
from .reactions import check_mass_control, check_quasi_positivity
from .spectral import (
    BoundaryCondition,
    Domain,
    ScalarField,
    build_grid,
    eigenfunction,
    semigroup_apply,
)
from .stepper import (
    BlowUpError,
    FixedPointDivergenceError,
    SimConfig,
    SpeciesSpec,
    run_with_state,
)
from .reactions import zero_system
from .tables import reproduce_table


def _structural_checks(plan, seed: int, n_samples: int):
    reaction = plan.sim.reaction
    reports = []
    if "quasi_positivity" in plan.checks or not plan.checks:
        reports.append(check_quasi_positivity(reaction, n_samples, seed))
    if "mass_control" in plan.checks or not plan.checks:
        weights = plan.sim.mass_weights or reaction.mass_weights
        kind = reaction.mass_kind
        if weights is not None and kind is not None:
            reports.append(
                check_mass_control(reaction, weights, kind, n_samples, seed)
            )
    return reports


def _cmd_run(args) -> int:
    try:
        plan = parse_config(args.config)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    out_dir = Path(args.out) if args.out else (plan.output.directory or Path("out"))

    reports = _structural_checks(plan, args.seed, args.samples)
    try:
        summary, snapshots, state = run_with_state(plan.sim)
    except (BlowUpError, FixedPointDivergenceError) as err:
        print(f"run aborted: {err}", file=sys.stderr)
        if err.partial_summary is not None:
            write_summary(err.partial_summary, reports, out_dir / "summary.json",
                          config_echo=plan.echo)
            print(f"partial summary written to {out_dir / 'summary.json'}")
        return 1

    if "interpolation" in plan.checks:
        for i, f in enumerate(state.fields):
            spec = plan.sim.species[i]
            s_hi = min(max(spec.s, 1e-3), 0.999)
            reports.append(interpolation_check(f, s_hi / 2.0, s_hi, p=2.0))
    if "stroock_varopoulos" in plan.checks:
        for f in state.fields:
            reports.append(stroock_varopoulos_check(f, s=0.5, q=2.0))

    for snap in snapshots:
        write_snapshot(
            plan.sim.grid, snap.values,
            out_dir / f"snapshot_t{snap.time:.6g}.csv",
        )
    write_snapshot(plan.sim.grid, [f.values for f in state.fields],
                   out_dir / "snapshot_final.csv")
    write_summary(summary, reports, out_dir / "summary.json", config_echo=plan.echo)

    print(f"stopped: {summary.stop_reason} at t={summary.final_time:g} "
          f"({summary.steps_taken} steps, {summary.wall_clock:.1f}s)")
    for i, (linf, l2) in enumerate(zip(summary.final_linf, summary.final_l2)):
        print(f"  species {i + 1}: |u|_inf={linf:.9g}  |u|_2={l2:.9g}")
    ok = True
    for report in reports:
        passed = report.passed
        ok = ok and passed
        name = getattr(report, "name", getattr(report, "property", "check"))
        print(f"  check {name}: {'PASS' if passed else 'FAIL'}")
    print(f"outputs in {out_dir}")
    return 0 if ok else 1


def _cmd_check(args) -> int:
    try:
        plan = parse_config(args.config)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    reports = _structural_checks(plan, args.seed, args.samples)
    ok = True
    for report in reports:
        ok = ok and report.passed
        witness = f" witness={report.witness}" if report.witness else ""
        print(
            f"({report.property}) worst violation {report.worst_violation:.3e} "
            f"over {report.samples_tested} samples: "
            f"{'PASS' if report.passed else 'FAIL'}{witness}"
        )
    return 0 if ok else 1


def _cmd_reproduce(args) -> int:
    results = reproduce_table(
        args.table, budget=args.budget, out_dir=args.out, threads=args.threads
    )
    ok = True
    for cell in results:
        ok = ok and cell.passed
        print(cell.row())
    print(f"{sum(c.passed for c in results)}/{len(results)} cells passed")
    return 0 if ok else 1


def _cmd_convergence(args) -> int:
    domain = Domain(((0.0, float(np.pi)),), BoundaryCondition.DIRICHLET)
    grid = build_grid(domain, (args.modes,))
    u0 = ScalarField(
        grid, eigenfunction(grid, 1).values + 0.5 * eigenfunction(grid, 4).values
    )
    t_end = 1.0
    ok = True
    for s in (0.3, 0.7):
        exact = semigroup_apply(u0, s, 1.0, t_end).values
        errors = []
        steps_list = []
        h_t = 4e-3
        for _ in range(args.levels):
            config = SimConfig(
                grid=grid,
                species=(SpeciesSpec(s=s, d=1.0, u0=u0),),
                reaction=zero_system(1),
                h_t=h_t,
                t_final=t_end,
                record_stride=10**9,
            )
            _, _, state = run_with_state(config)
            errors.append(float(np.max(np.abs(state.fields[0].values - exact))))
            steps_list.append(round(t_end / h_t))
            h_t /= 2.0
        orders = [np.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)]
        in_range = all(0.85 <= o <= 1.15 for o in orders)
        ok = ok and in_range
        order_str = ", ".join(f"{o:.3f}" for o in orders)
        print(
            f"s={s}: errors "
            + ", ".join(f"{e:.3e}" for e in errors)
            + f" | measured orders {order_str} "
            + ("PASS" if in_range else "FAIL")
        )
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fracrd",
        description="Spectral solver for fractional reaction-diffusion systems",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate a configured system")
    p_run.add_argument("config", help="run-configuration file (YAML)")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--seed", type=int, default=0, help="check-sampling seed")
    p_run.add_argument("--samples", type=int, default=200,
                       help="samples per structural check")
    p_run.set_defaults(func=_cmd_run)

    p_check = sub.add_parser("check", help="structural reaction checks only")
    p_check.add_argument("config")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--samples", type=int, default=1000)
    p_check.set_defaults(func=_cmd_check)

    p_rep = sub.add_parser("reproduce", help="rerun the published norm tables")
    p_rep.add_argument("table", choices=("T1", "T2"))
    p_rep.add_argument("--budget", choices=("fast", "full"), default="fast")
    p_rep.add_argument("--out", default=None, help="write per-cell outputs here")
    p_rep.add_argument("--threads", type=int, default=1)
    p_rep.set_defaults(func=_cmd_reproduce)

    p_conv = sub.add_parser("convergence", help="linear-problem convergence study")
    p_conv.add_argument("--modes", type=int, default=128)
    p_conv.add_argument("--levels", type=int, default=4)
    p_conv.set_defaults(func=_cmd_convergence)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
