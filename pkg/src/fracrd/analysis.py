"""Norms and numerical verification of the structural estimates.

Everything here is diagnostic machinery layered on the spectral operators:
discrete Lp norms (rectangle rule), the fractional interpolation inequality
between two operator orders, power-law decay fits for the smoothing
exponent of the heat semigroup, an order-preservation harness for pairs of
linear problems, and a soft check of the nonlinear energy inequality used
for powers of a nonnegative field.

The interpolation inequality at p = 2 is a finite Hoelder inequality on the
coefficient sums and therefore holds to rounding error; for other p the
sampled analogue picks up quadrature and truncation error and is only
reported against a loose tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .reactions import zero_system
from .spectral import Grid, ScalarField, apply_sfl, semigroup_apply
from .stepper import SimConfig, SpeciesSpec, initial_state, step


@dataclass(frozen=True)
class NormReport:
    """A single discrete Lp norm value and the quadrature that produced it."""

    p: float
    value: float
    quadrature: str

    def to_dict(self) -> dict:
        return {"p": self.p, "value": self.value, "quadrature": self.quadrature}


@dataclass(frozen=True)
class InequalityReport:
    """Two sides of an inequality; passes when ``rhs - lhs >= -tol``."""

    name: str
    lhs: float
    rhs: float
    tol: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.slack >= -self.tol

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "tol": self.tol,
            "passed": self.passed,
        }


def lp_norm(field: ScalarField, p: float) -> NormReport:
    """Discrete Lp norm: rectangle rule with weight ``h**N``; max-abs for p=inf."""
    p = float(p)
    if p < 1.0:
        raise ValueError(f"norm exponent p={p} must be >= 1")
    values = field.values
    if math.isinf(p):
        return NormReport(p=p, value=float(np.max(np.abs(values))), quadrature="max")
    weight = field.grid.cell_volume
    value = float((weight * np.sum(np.abs(values) ** p)) ** (1.0 / p))
    return NormReport(p=p, value=value, quadrature="rectangle")


def interpolation_check(
    field: ScalarField, s1: float, s2: float, p: float = 2.0
) -> InequalityReport:
    """Check the two-order operator bound

    ``|A^s1 u|_p <= |A^s2 u|_p**(s1/s2) * |u|_p**((s2-s1)/s2)``.

    Strict tolerance (1e-12 relative) at p = 2, loose (1e-6 relative)
    otherwise.
    """
    s1, s2 = float(s1), float(s2)
    if not (0.0 < s1 <= s2 < 1.0):
        raise ValueError(f"orders must satisfy 0 < s1 <= s2 < 1, got ({s1}, {s2})")
    lhs = lp_norm(apply_sfl(field, s1), p).value
    high = lp_norm(apply_sfl(field, s2), p).value
    base = lp_norm(field, p).value
    rhs = high ** (s1 / s2) * base ** ((s2 - s1) / s2)
    rel = 1e-12 if p == 2.0 else 1e-6
    return InequalityReport(
        name=f"interpolation(s1={s1}, s2={s2}, p={p})",
        lhs=lhs,
        rhs=rhs,
        tol=rel * rhs,
    )


def decay_exponent(series: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of ``log(norm)`` against ``log(t)``."""
    if len(series) < 5:
        raise ValueError("need at least 5 points to fit a decay exponent")
    t = np.array([pt[0] for pt in series], dtype=float)
    norms = np.array([pt[1] for pt in series], dtype=float)
    if np.any(t <= 0.0) or np.any(norms <= 0.0):
        raise ValueError("times and norms must be strictly positive")
    if np.any(np.diff(t) <= 0.0):
        raise ValueError("times must be strictly increasing")
    logt = np.log(t)
    logn = np.log(norms)
    design = np.vstack([logt, np.ones_like(logt)]).T
    slope, _ = np.linalg.lstsq(design, logn, rcond=None)[0]
    return float(slope)


@dataclass(frozen=True)
class DecayFit:
    """Power-law fit over an automatically selected time decade."""

    slope: float
    window: tuple[float, float]
    residual: float
    times: tuple[float, ...]
    norms: tuple[float, ...]


def fit_decay_window(
    times: Sequence[float], norms: Sequence[float], decade: float = 10.0,
    min_points: int = 10,
) -> DecayFit:
    """Fit the slope on the decade window with the smallest per-point residual."""
    t = np.asarray(times, dtype=float)
    n = np.asarray(norms, dtype=float)
    logt, logn = np.log(t), np.log(n)
    best = None
    for i in range(t.size):
        j = int(np.searchsorted(t, t[i] * decade, side="right"))
        if j > t.size:
            break
        if j - i < min_points or t[j - 1] < t[i] * 0.9 * decade:
            continue
        design = np.vstack([logt[i:j], np.ones(j - i)]).T
        coef, res, *_ = np.linalg.lstsq(design, logn[i:j], rcond=None)
        per_point = float(res[0]) / (j - i) if len(res) else 0.0
        if best is None or per_point < best[0]:
            best = (per_point, float(coef[0]), (float(t[i]), float(t[j - 1])))
    if best is None:
        # No full decade available: fall back to the whole range.
        slope = decay_exponent(list(zip(t, n)))
        return DecayFit(slope, (float(t[0]), float(t[-1])), float("nan"),
                        tuple(t), tuple(n))
    return DecayFit(best[1], best[2], best[0], tuple(t), tuple(n))


def impulse_decay_study(
    grid: Grid, s: float, d: float = 1.0, n_times: int = 80
) -> DecayFit:
    """Smoothing-exponent experiment: evolve a unit-mass single-node impulse.

    The sup norm of the semigroup applied to near-delta data follows
    ``t**(-N/(2s))`` between the truncation-dominated and boundary-dominated
    regimes; the sampled window is bracketed accordingly and the slope
    fitted on the cleanest decade.
    """
    values = np.zeros(grid.shape)
    center = tuple(k // 2 for k in grid.shape)
    values[center] = 1.0 / grid.cell_volume
    field = ScalarField(grid, values)
    lam = grid.eigenvalues
    lam_max = float(np.max(lam)) ** s
    lam_min = float(np.min(lam[lam > 0])) ** s
    t_lo = math.log(1e3) / (d * lam_max)
    t_hi = 0.5 / (d * lam_min)
    times = np.logspace(math.log10(t_lo), math.log10(t_hi), n_times)
    norms = [
        float(np.max(np.abs(semigroup_apply(field, s, d, t).values))) for t in times
    ]
    return fit_decay_window(times, norms)


def run_comparison_pair(
    s: float,
    d: float,
    grid: Grid,
    h_t: float,
    w0: ScalarField,
    z0: ScalarField,
    h_src,
    g_src,
    t_end: float,
    tol_scale: float = 1e-8,
) -> InequalityReport:
    """Order preservation for two forced linear problems.

    Integrates ``u_t + d*A^s u = source`` from ``w0`` with source ``h_src``
    and from ``z0`` with source ``g_src`` (constant fields or maps
    ``t -> field``), requiring ``w0 <= z0`` and ``h <= g`` pointwise at all
    step times.  Reports the minimum of ``z - w`` over space-time; passes
    when it stays above ``-tol_scale * max(1, |z|_inf)``.
    """
    n_steps = int(round(t_end / h_t))
    if n_steps < 1:
        raise ValueError("t_end must cover at least one step")

    def resolve(src, t):
        if src is None:
            return np.zeros(grid.shape)
        if callable(src):
            out = src(t)
            return out.values if isinstance(out, ScalarField) else np.asarray(out, float)
        if isinstance(src, ScalarField):
            return src.values
        return np.broadcast_to(np.asarray(src, dtype=float), grid.shape)

    if np.any(w0.values > z0.values):
        raise ValueError("precondition violated: w0 <= z0 must hold pointwise")
    for n in range(1, n_steps + 1):
        t = n * h_t
        if np.any(resolve(h_src, t) > resolve(g_src, t)):
            raise ValueError(f"precondition violated: h <= g fails at t={t}")

    def make_config(u0, src):
        return SimConfig(
            grid=grid,
            species=(SpeciesSpec(s=s, d=d, u0=u0),),
            reaction=zero_system(1),
            h_t=h_t,
            fixed_point_depth=1,
            t_final=t_end,
            sources=(lambda t, _src=src: resolve(_src, t),),
        )

    config_w = make_config(w0, h_src)
    config_z = make_config(z0, g_src)
    state_w = initial_state(config_w)
    state_z = initial_state(config_z)
    min_gap = float(np.min(z0.values - w0.values))
    z_sup = float(np.max(np.abs(z0.values)))
    for _ in range(n_steps):
        state_w = step(state_w, config_w)
        state_z = step(state_z, config_z)
        gap = state_z.fields[0].values - state_w.fields[0].values
        min_gap = min(min_gap, float(np.min(gap)))
        z_sup = max(z_sup, float(np.max(np.abs(state_z.fields[0].values))))
    tol = tol_scale * max(1.0, z_sup)
    return InequalityReport(
        name=f"comparison(s={s}, d={d})",
        lhs=-min_gap,
        rhs=0.0,
        tol=tol,
    )


def stroock_varopoulos_check(
    field: ScalarField, s: float, q: float
) -> InequalityReport:
    """Soft check of the power-pairing energy inequality

    ``<A^s u, u**q> >= (4q/(q+1)**2) * |A^(s/2) u**((q+1)/2)|_2**2``

    for nonnegative ``u`` (the input is clamped).  Discrete truncation does
    not inherit the continuous inequality exactly, so the tolerance is a
    loose ``1e-4`` relative and the result is meant to be reported, not
    asserted.
    """
    if q <= 1.0:
        raise ValueError(f"exponent q={q} must be > 1")
    if not (0.0 < s < 1.0):
        raise ValueError(f"order s={s} must lie in (0, 1)")
    grid = field.grid
    u = np.maximum(field.values, 0.0)
    clamped = ScalarField(grid, u)
    lhs_integrand = apply_sfl(clamped, s).values * u ** q
    lhs = float(grid.cell_volume * np.sum(lhs_integrand))
    half_power = ScalarField(grid, u ** ((q + 1.0) / 2.0))
    half_norm = lp_norm(apply_sfl(half_power, s / 2.0), 2.0).value
    rhs = 4.0 * q / (q + 1.0) ** 2 * half_norm ** 2
    # Inequality direction: lhs >= rhs, so report with sides swapped.
    return InequalityReport(
        name=f"stroock_varopoulos(s={s}, q={q})",
        lhs=rhs,
        rhs=lhs,
        tol=1e-4 * max(rhs, 0.0),
    )
