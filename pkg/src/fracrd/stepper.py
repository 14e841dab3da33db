"""Implicit-diffusion time stepping for multi-species fractional systems.

One step advances every species by a backward-Euler solve that is exact per
eigenmode, with the nonlinearity handled by a lagged fixed-point loop of
fixed depth L: starting from the previous state, each inner iteration
evaluates the reaction pointwise in physical space on the previous iterate,
transforms it, and applies

    u_k_new = (u_k_old + h_t * f_k) / (1 + d * lambda_k**s * h_t)

mode by mode.  L = 1 treats the nonlinearity explicitly; large L approaches
the fully implicit solve.

Runs stop at a final time, at stationarity (max per-step change over h_t
below a tolerance), or on a step budget, whichever triggers first.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import kernels
from .reactions import ReactionSystem
from .spectral import (
    Grid,
    ModeCoeffs,
    ScalarField,
    forward_array,
    inverse_array,
)


class PositivityPolicy(str, Enum):
    """How negative spectral undershoot is handled around the reaction."""

    NONE = "none"
    CLAMP_IN_REACTION = "clamp_in_reaction"
    CLAMP_STATE = "clamp_state"


class BlowUpError(RuntimeError):
    """Non-finite values appeared during stepping."""

    def __init__(self, step_index: int, species: int, partial_summary=None):
        self.step_index = step_index
        self.species = species
        self.partial_summary = partial_summary
        super().__init__(
            f"non-finite values in species {species} at step {step_index}"
        )


class FixedPointDivergenceError(RuntimeError):
    """Inner fixed-point iteration diverged (change grew >10x over iteration 1)."""

    def __init__(self, step_index: int, first_change: float, last_change: float,
                 partial_summary=None):
        self.step_index = step_index
        self.first_change = first_change
        self.last_change = last_change
        self.partial_summary = partial_summary
        super().__init__(
            f"fixed-point iteration diverged at step {step_index}: "
            f"change {first_change:.3e} -> {last_change:.3e}"
        )


@dataclass(frozen=True)
class SpeciesSpec:
    """Fractional order, diffusivity and initial condition of one species."""

    s: float
    d: float
    u0: ScalarField

    def __post_init__(self) -> None:
        if not (0.0 < self.s <= 1.0):
            raise ValueError(f"fractional order s={self.s} must lie in (0, 1]")
        if self.d <= 0.0:
            raise ValueError(f"diffusivity d={self.d} must be positive")


# A source is absent, a constant-in-time field, or a map t -> values array.
Source = Optional[object]


@dataclass(frozen=True)
class SimConfig:
    """Full specification of one run."""

    grid: Grid
    species: tuple[SpeciesSpec, ...]
    reaction: ReactionSystem
    h_t: float
    fixed_point_depth: int = 1
    t_final: Optional[float] = None
    steady_tol: Optional[float] = None
    snapshot_times: tuple[float, ...] = ()
    positivity_policy: PositivityPolicy = PositivityPolicy.CLAMP_IN_REACTION
    record_stride: int = 1
    mass_weights: Optional[tuple[float, ...]] = None
    sources: Optional[tuple[Source, ...]] = None
    fp_tol: Optional[float] = None
    max_steps: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "species", tuple(self.species))
        object.__setattr__(
            self, "positivity_policy", PositivityPolicy(self.positivity_policy)
        )
        object.__setattr__(
            self, "snapshot_times", tuple(float(t) for t in self.snapshot_times)
        )
        if len(self.species) != self.reaction.m:
            raise ValueError(
                f"{len(self.species)} species but reaction "
                f"'{self.reaction.name}' has m={self.reaction.m}"
            )
        if self.h_t <= 0.0:
            raise ValueError(f"time step h_t={self.h_t} must be positive")
        if self.fixed_point_depth < 1:
            raise ValueError("fixed_point_depth must be >= 1")
        if self.t_final is None and self.steady_tol is None:
            raise ValueError("provide t_final, steady_tol, or both")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")
        for spec in self.species:
            if spec.u0.grid is not self.grid and spec.u0.grid != self.grid:
                raise ValueError("species initial condition lives on another grid")
        if list(self.snapshot_times) != sorted(self.snapshot_times):
            raise ValueError("snapshot_times must be sorted")
        if self.snapshot_times and self.snapshot_times[0] < 0.0:
            raise ValueError("snapshot_times must be nonnegative")
        if self.t_final is not None and any(
            t > self.t_final + 1e-12 for t in self.snapshot_times
        ):
            raise ValueError("snapshot_times must lie within [0, t_final]")
        if self.sources is not None and len(self.sources) != len(self.species):
            raise ValueError("sources must have one entry per species")
        if self.mass_weights is not None and len(self.mass_weights) != len(self.species):
            raise ValueError("mass_weights must have one entry per species")


@dataclass(frozen=True)
class SimState:
    """Evolving multi-species state, kept in physical and coefficient form."""

    t: float
    step_index: int
    fields: tuple[ScalarField, ...]
    coeffs: tuple[ModeCoeffs, ...]
    last_fp_residual: float = float("nan")


def initial_state(config: SimConfig) -> SimState:
    fields = tuple(spec.u0 for spec in config.species)
    coeffs = tuple(
        ModeCoeffs(config.grid, forward_array(config.grid, f.values)) for f in fields
    )
    return SimState(t=0.0, step_index=0, fields=fields, coeffs=coeffs)


def _source_values(source: Source, t: float, grid: Grid) -> Optional[np.ndarray]:
    if source is None:
        return None
    if callable(source):
        out = source(t)
        out = out.values if isinstance(out, ScalarField) else np.asarray(out, float)
    elif isinstance(source, ScalarField):
        out = source.values
    else:
        out = np.asarray(source, dtype=float)
    if out.shape != grid.shape:
        raise ValueError(f"source shape {out.shape} does not match grid {grid.shape}")
    return out


class _Stepper:
    """Per-run workspace: precomputed mode denominators and raw-array loop."""

    def __init__(self, config: SimConfig):
        self.config = config
        self.grid = config.grid
        ht = config.h_t
        lam = self.grid.eigenvalues
        self.inv_denoms = [
            (1.0 / (1.0 + spec.d * ht * lam ** spec.s)).ravel()
            for spec in config.species
        ]
        self.shape = self.grid.shape

    def advance(self, coeffs: list[np.ndarray], values: list[np.ndarray],
                t_next: float, step_index: int):
        """One full step on bare arrays; returns (coeffs, values, fp_first, fp_last)."""
        config = self.config
        grid = self.grid
        ht = config.h_t
        clamp = config.positivity_policy is PositivityPolicy.CLAMP_IN_REACTION
        sources = config.sources
        m = len(values)

        iterate = values
        first_change = last_change = 0.0
        new_coeffs = coeffs
        for ell in range(1, config.fixed_point_depth + 1):
            feed = [np.maximum(u, 0.0) for u in iterate] if clamp else iterate
            rhs = config.reaction.evaluate(feed)
            if sources is not None:
                for i in range(m):
                    extra = _source_values(sources[i], t_next, grid)
                    if extra is not None:
                        rhs[i] = rhs[i] + extra
            new_coeffs = []
            new_values = []
            change = 0.0
            for i in range(m):
                fk = forward_array(grid, rhs[i])
                ck = kernels.implicit_mode_update(
                    coeffs[i].ravel(), fk.ravel(), ht, self.inv_denoms[i]
                ).reshape(self.shape)
                vi = inverse_array(grid, ck)
                if not np.all(np.isfinite(vi)):
                    raise BlowUpError(step_index, species=i)
                new_coeffs.append(ck)
                new_values.append(vi)
                change = max(
                    change, kernels.max_abs_diff(vi.ravel(), iterate[i].ravel())
                )
            if ell == 1:
                first_change = change
            last_change = change
            iterate = new_values
            if ell >= 2 and change > 10.0 * first_change and first_change > 0.0:
                raise FixedPointDivergenceError(step_index, first_change, change)
            if config.fp_tol is not None and change < config.fp_tol:
                break

        if config.positivity_policy is PositivityPolicy.CLAMP_STATE:
            iterate = [np.maximum(u, 0.0) for u in iterate]
            new_coeffs = [forward_array(grid, u) for u in iterate]
        return new_coeffs, iterate, first_change, last_change


def step(state: SimState, config: SimConfig) -> SimState:
    """Advance one time step of size ``config.h_t``.

    Convenience wrapper that rebuilds the per-run workspace each call; use
    :func:`run` for long integrations.
    """
    stepper = _Stepper(config)
    coeffs = [c.coeffs for c in state.coeffs]
    values = [f.values for f in state.fields]
    new_coeffs, new_values, _, last = stepper.advance(
        coeffs, values, state.t + config.h_t, state.step_index + 1
    )
    return SimState(
        t=state.t + config.h_t,
        step_index=state.step_index + 1,
        fields=tuple(ScalarField(config.grid, v) for v in new_values),
        coeffs=tuple(ModeCoeffs(config.grid, c) for c in new_coeffs),
        last_fp_residual=last,
    )


def steady_state_residual(prev: SimState, next_state: SimState, h_t: float) -> float:
    """Stationarity proxy: max over species of ``|u_new - u_old|_inf / h_t``."""
    if len(prev.fields) != len(next_state.fields):
        raise ValueError("states have different species counts")
    worst = 0.0
    for f_prev, f_next in zip(prev.fields, next_state.fields):
        if f_prev.values.shape != f_next.values.shape:
            raise ValueError("states have mismatched field shapes")
        worst = max(
            worst,
            kernels.max_abs_diff(f_next.values.ravel(), f_prev.values.ravel()),
        )
    return worst / h_t


@dataclass
class Snapshot:
    """Field values captured at the step nearest a requested time."""

    requested_time: float
    time: float
    step_index: int
    values: list[np.ndarray]


@dataclass
class RunSummary:
    """Norm, mass and residual bookkeeping for one run."""

    final_time: float = 0.0
    steps_taken: int = 0
    stop_reason: str = ""
    times: list[float] = field(default_factory=list)
    linf: list[list[float]] = field(default_factory=list)
    l2: list[list[float]] = field(default_factory=list)
    min_value: list[list[float]] = field(default_factory=list)
    mass: list[float] = field(default_factory=list)
    steady_residual: list[float] = field(default_factory=list)
    fixed_point_residuals: list[float] = field(default_factory=list)
    final_linf: list[float] = field(default_factory=list)
    final_l2: list[float] = field(default_factory=list)
    min_over_run: list[float] = field(default_factory=list)
    mass_weights: list[float] = field(default_factory=list)
    wall_clock: float = 0.0

    def to_dict(self) -> dict:
        return {
            "final_time": self.final_time,
            "steps_taken": self.steps_taken,
            "stop_reason": self.stop_reason,
            "times": self.times,
            "linf": self.linf,
            "l2": self.l2,
            "min_value": self.min_value,
            "mass": self.mass,
            "steady_residual": self.steady_residual,
            "fixed_point_residuals": self.fixed_point_residuals,
            "final_linf": self.final_linf,
            "final_l2": self.final_l2,
            "min_over_run": self.min_over_run,
            "mass_weights": self.mass_weights,
            "wall_clock": self.wall_clock,
        }


def _discrete_l2(values: np.ndarray, cell_volume: float) -> float:
    return float(np.sqrt(cell_volume * np.sum(values * values)))


def run(config: SimConfig) -> tuple[RunSummary, list[Snapshot]]:
    """Integrate until the configured stopping rule fires.

    Returns the summary and the captured snapshots.  On blow-up or
    fixed-point divergence the partial summary is attached to the raised
    error.
    """
    summary, snapshots, _ = run_with_state(config)
    return summary, snapshots


def run_with_state(config: SimConfig) -> tuple[RunSummary, list[Snapshot], SimState]:
    """Like :func:`run`, additionally returning the terminal state."""
    start = time.perf_counter()
    stepper = _Stepper(config)
    grid = config.grid
    ht = config.h_t
    m = len(config.species)
    weights = config.mass_weights
    if weights is None:
        weights = config.reaction.mass_weights or tuple(1.0 for _ in range(m))
    weights = [float(w) for w in weights]

    state = initial_state(config)
    coeffs = [c.coeffs for c in state.coeffs]
    values = [f.values for f in state.fields]

    summary = RunSummary(mass_weights=list(weights))
    snapshots: list[Snapshot] = []
    snap_targets = {
        int(round(t_req / ht)): t_req for t_req in config.snapshot_times
    }
    min_over_run = [float(np.min(v)) for v in values]

    def record(t: float, residual: float, fp_residual: float) -> None:
        summary.times.append(t)
        summary.linf.append([float(np.max(np.abs(v))) for v in values])
        summary.l2.append([_discrete_l2(v, grid.cell_volume) for v in values])
        summary.min_value.append([float(np.min(v)) for v in values])
        summary.mass.append(
            float(sum(w * float(np.mean(v)) for w, v in zip(weights, values)))
        )
        summary.steady_residual.append(residual)
        summary.fixed_point_residuals.append(fp_residual)

    def capture(n: int, t: float) -> None:
        if n in snap_targets:
            snapshots.append(
                Snapshot(snap_targets[n], t, n, [v.copy() for v in values])
            )

    record(0.0, float("nan"), float("nan"))
    capture(0, 0.0)

    n = 0
    stop_reason = ""
    last_residual = float("nan")
    last_fp = float("nan")
    try:
        while True:
            if config.t_final is not None and n * ht >= config.t_final - 1e-12:
                stop_reason = "t_final"
                break
            if config.max_steps is not None and n >= config.max_steps:
                stop_reason = "max_steps"
                break
            t_next = (n + 1) * ht
            new_coeffs, new_values, _, last_fp = stepper.advance(
                coeffs, values, t_next, n + 1
            )
            residual = 0.0
            for i in range(m):
                residual = max(
                    residual,
                    kernels.max_abs_diff(new_values[i].ravel(), values[i].ravel()),
                )
            last_residual = residual / ht
            coeffs, values = new_coeffs, new_values
            n += 1
            for i in range(m):
                mv = float(np.min(values[i]))
                if mv < min_over_run[i]:
                    min_over_run[i] = mv
            if n % config.record_stride == 0:
                record(t_next, last_residual, last_fp)
            capture(n, t_next)
            if config.steady_tol is not None and last_residual < config.steady_tol:
                stop_reason = "steady"
                break
        if summary.times[-1] != n * ht:
            record(n * ht, last_residual, last_fp)
    except (BlowUpError, FixedPointDivergenceError) as err:
        summary.final_time = n * ht
        summary.steps_taken = n
        summary.stop_reason = f"aborted:{type(err).__name__}"
        summary.final_linf = [float(np.max(np.abs(v))) for v in values]
        summary.final_l2 = [_discrete_l2(v, grid.cell_volume) for v in values]
        summary.min_over_run = min_over_run
        summary.wall_clock = time.perf_counter() - start
        err.partial_summary = summary
        raise

    summary.final_time = n * ht
    summary.steps_taken = n
    summary.stop_reason = stop_reason
    summary.final_linf = [float(np.max(np.abs(v))) for v in values]
    summary.final_l2 = [_discrete_l2(v, grid.cell_volume) for v in values]
    summary.min_over_run = min_over_run
    summary.wall_clock = time.perf_counter() - start
    end_state = SimState(
        t=n * ht,
        step_index=n,
        fields=tuple(ScalarField(grid, v) for v in values),
        coeffs=tuple(ModeCoeffs(grid, c) for c in coeffs),
        last_fp_residual=last_fp,
    )
    return summary, snapshots, end_state
