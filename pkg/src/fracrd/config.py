"""Run-configuration files.

Configs are YAML documents with the sections ``domain``, ``grid``,
``species``, ``reaction``, ``time``, ``output`` and ``checks`` (see the
README for the full schema and ``configs/`` for shipped examples).  Parsing
validates every cross-field invariant and reports semantic problems with
their section path; YAML syntax errors keep the line/column mark pyyaml
provides.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .expressions import ExpressionError, compile_expression
from .io import load_field_from_csv
from .reactions import (
    MassKind,
    MonomialTerm,
    ReactionSystem,
    brusselator,
    polynomial_system,
    reversible_abg,
    zero_system,
)
from .spectral import BoundaryCondition, Domain, Grid, ScalarField, build_grid
from .stepper import PositivityPolicy, SimConfig, SpeciesSpec


class ConfigError(ValueError):
    """Configuration file is syntactically or semantically invalid."""


KNOWN_CHECKS = ("quasi_positivity", "mass_control", "interpolation", "stroock_varopoulos")


@dataclass(frozen=True)
class OutputOptions:
    directory: Optional[Path]
    snapshot_times: tuple[float, ...]
    stride: int


@dataclass(frozen=True)
class RunPlan:
    """Parsed configuration: simulation, requested checks and output options."""

    sim: SimConfig
    checks: tuple[str, ...]
    output: OutputOptions
    echo: dict


def _section(doc: dict, name: str, required: bool = True):
    if name not in doc:
        if required:
            raise ConfigError(f"missing section '{name}'")
        return {}
    return doc[name]


def _get(mapping: dict, key: str, where: str, required: bool = True, default=None):
    if key not in mapping:
        if required:
            raise ConfigError(f"{where}: missing key '{key}'")
        return default
    return mapping[key]


def _real(value, where: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected a real number, got {value!r}") from None


def _build_reaction(section: dict, n_species: int) -> ReactionSystem:
    name = _get(section, "name", "reaction")
    params = _get(section, "params", "reaction", required=False, default={}) or {}
    if not isinstance(params, dict):
        raise ConfigError("reaction.params: expected a mapping")
    if name == "brusselator":
        try:
            return brusselator(
                _real(_get(params, "a", "reaction.params"), "reaction.params.a"),
                _real(_get(params, "b", "reaction.params"), "reaction.params.b"),
            )
        except ValueError as err:
            raise ConfigError(f"reaction: {err}") from None
    if name == "reversible_abg":
        try:
            return reversible_abg(
                _real(_get(params, "alpha", "reaction.params"), "reaction.params.alpha"),
                _real(_get(params, "beta", "reaction.params"), "reaction.params.beta"),
                _real(_get(params, "gamma", "reaction.params"), "reaction.params.gamma"),
            )
        except ValueError as err:
            raise ConfigError(f"reaction: {err}") from None
    if name == "zero":
        return zero_system(n_species)
    if name == "polynomial":
        terms_cfg = _get(section, "terms", "reaction")
        if not isinstance(terms_cfg, list) or not terms_cfg:
            raise ConfigError("reaction.terms: expected a non-empty list per species")
        terms = []
        for i, species_terms in enumerate(terms_cfg):
            rows = []
            for j, row in enumerate(species_terms or []):
                where = f"reaction.terms[{i}][{j}]"
                coeff = _real(_get(row, "coeff", where), f"{where}.coeff")
                exps = _get(row, "exponents", where)
                if len(exps) != len(terms_cfg):
                    raise ConfigError(
                        f"{where}.exponents: expected {len(terms_cfg)} entries"
                    )
                rows.append(MonomialTerm(coeff, tuple(float(e) for e in exps)))
            terms.append(rows)
        kind = _get(section, "mass_kind", "reaction", required=False)
        return polynomial_system(
            name=_get(section, "label", "reaction", required=False, default="polynomial"),
            terms_per_species=terms,
            params={},
            mass_weights=_get(section, "mass_weights", "reaction", required=False),
            mass_kind=MassKind(kind) if kind else None,
            mprime_constant=_get(section, "mprime_constant", "reaction", required=False),
        )
    raise ConfigError(f"reaction.name: unknown reaction '{name}'")


def _initial_field(entry: dict, index: int, grid: Grid, base_dir: Path) -> ScalarField:
    where = f"species[{index}]"
    expr = entry.get("u0")
    csv_spec = entry.get("u0_csv")
    if (expr is None) == (csv_spec is None):
        raise ConfigError(f"{where}: provide exactly one of 'u0' or 'u0_csv'")
    if expr is not None:
        try:
            evaluate = compile_expression(str(expr), grid.domain.dim)
            values = evaluate(*grid.coordinate_mesh())
        except ExpressionError as err:
            raise ConfigError(f"{where}.u0: {err}") from None
        return ScalarField(grid, values)
    if isinstance(csv_spec, str):
        path, species_index = csv_spec, 0
    elif isinstance(csv_spec, dict):
        path = _get(csv_spec, "path", f"{where}.u0_csv")
        species_index = int(csv_spec.get("species", 0))
    else:
        raise ConfigError(f"{where}.u0_csv: expected a path or a mapping")
    resolved = Path(path)
    if not resolved.is_absolute():
        resolved = base_dir / resolved
    if not resolved.exists():
        raise ConfigError(f"{where}.u0_csv: file not found: {resolved}")
    try:
        return load_field_from_csv(resolved, grid, species_index)
    except ValueError as err:
        raise ConfigError(f"{where}.u0_csv: {err}") from None


def parse_config(path) -> RunPlan:
    """Parse and validate a run-configuration file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with path.open("r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except yaml.YAMLError as err:
        raise ConfigError(f"{path}: {err}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a mapping of sections")

    dom_cfg = _section(doc, "domain")
    axes_cfg = _get(dom_cfg, "axes", "domain")
    if not isinstance(axes_cfg, list) or not axes_cfg:
        raise ConfigError("domain.axes: expected a list of [c1, c2] pairs")
    axes = []
    for i, pair in enumerate(axes_cfg):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ConfigError(f"domain.axes[{i}]: expected a [c1, c2] pair")
        axes.append((_real(pair[0], f"domain.axes[{i}]"),
                     _real(pair[1], f"domain.axes[{i}]")))
    bc_name = str(_get(dom_cfg, "bc", "domain")).lower()
    try:
        domain = Domain(tuple(axes), BoundaryCondition(bc_name))
    except ValueError as err:
        raise ConfigError(f"domain: {err}") from None
    declared_dim = dom_cfg.get("dim")
    if declared_dim is not None and int(declared_dim) != domain.dim:
        raise ConfigError(
            f"domain.dim: declared {declared_dim} but axes give {domain.dim}"
        )

    grid_cfg = _section(doc, "grid")
    modes = _get(grid_cfg, "modes", "grid")
    if np.isscalar(modes):
        modes = [modes]
    if len(modes) != domain.dim:
        raise ConfigError(
            f"grid.modes: expected {domain.dim} entries, got {len(modes)}"
        )
    try:
        grid = build_grid(domain, tuple(int(k) for k in modes))
    except ValueError as err:
        raise ConfigError(f"grid: {err}") from None

    species_cfg = _section(doc, "species")
    if not isinstance(species_cfg, list) or not species_cfg:
        raise ConfigError("species: expected a non-empty list")

    reaction = _build_reaction(_section(doc, "reaction"), len(species_cfg))
    if reaction.m != len(species_cfg):
        raise ConfigError(
            f"species: {len(species_cfg)} entries but reaction "
            f"'{reaction.name}' has {reaction.m} species"
        )

    species = []
    for i, entry in enumerate(species_cfg):
        where = f"species[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{where}: expected a mapping")
        s = _real(_get(entry, "s", where), f"{where}.s")
        d = _real(_get(entry, "d", where), f"{where}.d")
        u0 = _initial_field(entry, i, grid, path.parent)
        try:
            species.append(SpeciesSpec(s=s, d=d, u0=u0))
        except ValueError as err:
            raise ConfigError(f"{where}: {err}") from None

    time_cfg = _section(doc, "time")
    h_t = _real(_get(time_cfg, "h_t", "time"), "time.h_t")
    depth = int(time_cfg.get("fixed_point_depth", time_cfg.get("L", 1)))
    t_final = time_cfg.get("t_final")
    steady_tol = time_cfg.get("steady_tol")
    if t_final is None and steady_tol is None:
        raise ConfigError("time: provide t_final, steady_tol, or both")
    policy = str(time_cfg.get("positivity_policy", "clamp_in_reaction"))
    try:
        policy = PositivityPolicy(policy)
    except ValueError:
        raise ConfigError(
            f"time.positivity_policy: unknown policy '{policy}'"
        ) from None
    fp_tol = time_cfg.get("fp_tol")
    max_steps = time_cfg.get("max_steps")

    out_cfg = _section(doc, "output", required=False) or {}
    directory = out_cfg.get("dir")
    snapshot_times = tuple(
        _real(t, "output.snapshot_times") for t in out_cfg.get("snapshot_times", []) or []
    )
    stride = int(out_cfg.get("stride", 1))

    checks_cfg = doc.get("checks") or []
    if isinstance(checks_cfg, dict):
        checks_cfg = checks_cfg.get("run", [])
    checks = []
    for name in checks_cfg:
        if name not in KNOWN_CHECKS:
            raise ConfigError(
                f"checks: unknown check '{name}' (known: {', '.join(KNOWN_CHECKS)})"
            )
        checks.append(str(name))

    mass_weights = doc.get("reaction", {}).get("mass_weights")
    try:
        sim = SimConfig(
            grid=grid,
            species=tuple(species),
            reaction=reaction,
            h_t=h_t,
            fixed_point_depth=depth,
            t_final=float(t_final) if t_final is not None else None,
            steady_tol=float(steady_tol) if steady_tol is not None else None,
            snapshot_times=snapshot_times,
            positivity_policy=policy,
            record_stride=stride,
            mass_weights=tuple(float(w) for w in mass_weights) if mass_weights else None,
            fp_tol=float(fp_tol) if fp_tol is not None else None,
            max_steps=int(max_steps) if max_steps is not None else None,
        )
    except ValueError as err:
        raise ConfigError(str(err)) from None

    return RunPlan(
        sim=sim,
        checks=tuple(checks),
        output=OutputOptions(
            directory=Path(directory) if directory else None,
            snapshot_times=snapshot_times,
            stride=stride,
        ),
        echo=doc,
    )
