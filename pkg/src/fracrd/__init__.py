"""Fourier spectral solver for fractional reaction-diffusion systems.

Rectangular Dirichlet/Neumann domains, per-mode application of the
fractional Laplacian and its heat semigroup, backward-Euler/fixed-point
time stepping of m-species reaction systems, and a diagnostics layer
(structural checks, interpolation and contraction inequalities, decay
exponents, table reproduction).
"""

__version__ = "0.1.0"

from .accel import using_numba
from .analysis import (
    DecayFit,
    InequalityReport,
    NormReport,
    decay_exponent,
    fit_decay_window,
    impulse_decay_study,
    interpolation_check,
    lp_norm,
    run_comparison_pair,
    stroock_varopoulos_check,
)
from .reactions import (
    MassKind,
    MonomialTerm,
    ReactionSystem,
    StructureReport,
    brusselator,
    check_mass_control,
    check_quasi_positivity,
    eval_reaction,
    polynomial_system,
    reversible_abg,
    zero_system,
)
from .spectral import (
    BoundaryCondition,
    Domain,
    Grid,
    ModeCoeffs,
    ScalarField,
    apply_sfl,
    build_grid,
    eigenfunction,
    eigenvalue,
    forward_transform,
    inverse_transform,
    naive_forward_transform,
    naive_inverse_transform,
    semigroup_apply,
)
from .stepper import (
    BlowUpError,
    FixedPointDivergenceError,
    PositivityPolicy,
    RunSummary,
    SimConfig,
    SimState,
    Snapshot,
    SpeciesSpec,
    initial_state,
    run,
    run_with_state,
    steady_state_residual,
    step,
)

__all__ = [
    "__version__",
    "using_numba",
    "BoundaryCondition",
    "Domain",
    "Grid",
    "ScalarField",
    "ModeCoeffs",
    "build_grid",
    "eigenvalue",
    "eigenfunction",
    "forward_transform",
    "inverse_transform",
    "naive_forward_transform",
    "naive_inverse_transform",
    "apply_sfl",
    "semigroup_apply",
    "MassKind",
    "MonomialTerm",
    "ReactionSystem",
    "StructureReport",
    "brusselator",
    "reversible_abg",
    "zero_system",
    "polynomial_system",
    "eval_reaction",
    "check_quasi_positivity",
    "check_mass_control",
    "PositivityPolicy",
    "SpeciesSpec",
    "SimConfig",
    "SimState",
    "Snapshot",
    "RunSummary",
    "BlowUpError",
    "FixedPointDivergenceError",
    "initial_state",
    "step",
    "run",
    "run_with_state",
    "steady_state_residual",
    "NormReport",
    "InequalityReport",
    "DecayFit",
    "lp_norm",
    "interpolation_check",
    "decay_exponent",
    "fit_decay_window",
    "impulse_decay_study",
    "run_comparison_pair",
    "stroock_varopoulos_check",
]
