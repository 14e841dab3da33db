"""Reaction vector fields and structural-condition checkers.

A reaction system is an m-species pointwise map ``r -> f(r)`` together with
optional mass-control metadata: a positive weight vector ``a`` such that
``sum_i a_i f_i(r)`` is nonpositive (kind ``M``) or grows at most linearly
(kind ``Mprime``).  Built-in systems: the two-species Brusselator, the
three-species reversible system with a single net rate, a zero system for
pure-diffusion runs, and a generic polynomial constructor.

The checkers are sampling-based screens, not proofs: they draw states from
``[0, R]^m`` and report the worst observed violation together with a
witness state when one exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels


class MassKind(str, Enum):
    M = "M"
    MPRIME = "Mprime"


@dataclass(frozen=True)
class ReactionSystem:
    """Immutable m-species reaction vector field.

    ``rhs`` maps a tuple of m equal-shape float arrays to a tuple of m
    arrays; it must be finite on finite inputs (small negative entries
    included, see the power-evaluation policy in :mod:`fracrd.kernels`).
    """

    name: str
    m: int
    params: dict
    rhs: Callable
    mass_weights: Optional[tuple[float, ...]] = None
    mass_kind: Optional[MassKind] = None
    mprime_constant: Optional[float] = None

    def evaluate(self, state: Sequence[np.ndarray]) -> list[np.ndarray]:
        """Evaluate the vector field componentwise on m stacked arrays."""
        if len(state) != self.m:
            raise ValueError(f"{self.name} expects {self.m} species, got {len(state)}")
        arrays = [np.asarray(u, dtype=float) for u in state]
        shape = arrays[0].shape
        for u in arrays[1:]:
            if u.shape != shape:
                raise ValueError("species arrays must share one shape")
        for i, u in enumerate(arrays):
            if not np.all(np.isfinite(u)):
                raise ValueError(f"species {i} input contains non-finite entries")
        out = self.rhs(arrays)
        return [np.asarray(f, dtype=float).reshape(shape) for f in out]


def eval_reaction(system: ReactionSystem, r) -> np.ndarray:
    """Evaluate ``f`` at a single state vector ``r``; returns shape ``(m,)``."""
    r = np.asarray(r, dtype=float)
    if r.shape != (system.m,):
        raise ValueError(f"state vector must have shape ({system.m},), got {r.shape}")
    out = system.evaluate([np.atleast_1d(ri) for ri in r])
    return np.array([float(f[0]) for f in out])


def brusselator(a: float, b: float) -> ReactionSystem:
    """Two-species autocatalytic model.

    ``f1 = -u1*u2**2 + b*u2`` and ``f2 = u1*u2**2 - (b+1)*u2 + a``.
    Satisfies quasi-positivity, and with unit weights the sum
    ``f1 + f2 = a - u2`` grows at most linearly (kind ``Mprime`` with
    constant ``a``).
    """
    a = float(a)
    b = float(b)
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"brusselator parameters must be positive, got a={a}, b={b}")

    def rhs(state):
        u1, u2 = state
        shape = u1.shape
        f1, f2 = kernels.brusselator_rhs(u1.ravel(), u2.ravel(), a, b)
        return f1.reshape(shape), f2.reshape(shape)

    return ReactionSystem(
        name="brusselator",
        m=2,
        params={"a": a, "b": b},
        rhs=rhs,
        mass_weights=(1.0, 1.0),
        mass_kind=MassKind.MPRIME,
        mprime_constant=a,
    )


def reversible_abg(alpha: float, beta: float, gamma: float) -> ReactionSystem:
    """Three-species reversible reaction with net rate ``g = u3**gamma - u1**alpha * u2**beta``.

    ``f = (alpha*g, beta*g, -gamma*g)``.  The weighted sum with weights
    ``(beta*gamma, alpha*gamma, 2*alpha*beta)`` vanishes identically
    (kind ``M`` holding with equality).
    """
    alpha, beta, gamma = float(alpha), float(beta), float(gamma)
    if min(alpha, beta, gamma) < 1.0:
        raise ValueError(
            f"exponents must be >= 1, got ({alpha}, {beta}, {gamma})"
        )
    clamps = tuple(not e.is_integer() for e in (alpha, beta, gamma))

    def rhs(state):
        u1, u2, u3 = state
        shape = u1.shape
        f1, f2, f3 = kernels.reversible_rhs(
            u1.ravel(), u2.ravel(), u3.ravel(), alpha, beta, gamma, *clamps
        )
        return f1.reshape(shape), f2.reshape(shape), f3.reshape(shape)

    return ReactionSystem(
        name="reversible_abg",
        m=3,
        params={"alpha": alpha, "beta": beta, "gamma": gamma},
        rhs=rhs,
        mass_weights=(beta * gamma, alpha * gamma, 2.0 * alpha * beta),
        mass_kind=MassKind.M,
    )


def zero_system(m: int) -> ReactionSystem:
    """m-species zero vector field (pure diffusion)."""
    m = int(m)
    if m < 1:
        raise ValueError("species count must be >= 1")

    def rhs(state):
        return tuple(np.zeros_like(u) for u in state)

    return ReactionSystem(
        name="zero",
        m=m,
        params={},
        rhs=rhs,
        mass_weights=tuple(1.0 for _ in range(m)),
        mass_kind=MassKind.M,
    )


@dataclass(frozen=True)
class MonomialTerm:
    """``coefficient * prod_j u_j**exponents[j]``; fractional exponents clamp the base."""

    coefficient: float
    exponents: tuple[float, ...]


def polynomial_system(
    name: str,
    terms_per_species: Sequence[Sequence[MonomialTerm]],
    params: Optional[dict] = None,
    mass_weights=None,
    mass_kind: Optional[MassKind] = None,
    mprime_constant: Optional[float] = None,
) -> ReactionSystem:
    """Generic polynomial reaction built from per-species monomial lists."""
    m = len(terms_per_species)
    if m < 1:
        raise ValueError("need at least one species")
    terms = tuple(tuple(ts) for ts in terms_per_species)
    for ts in terms:
        for term in ts:
            if len(term.exponents) != m:
                raise ValueError(
                    f"monomial exponents {term.exponents} must have length {m}"
                )

    def rhs(state):
        out = []
        for ts in terms:
            acc = np.zeros_like(state[0])
            for term in ts:
                prod = np.full_like(state[0], term.coefficient)
                for u, e in zip(state, term.exponents):
                    if e == 0.0:
                        continue
                    base = u if float(e).is_integer() else np.maximum(u, 0.0)
                    prod = prod * base ** e
                acc = acc + prod
            out.append(acc)
        return tuple(out)

    return ReactionSystem(
        name=name,
        m=m,
        params=dict(params or {}),
        rhs=rhs,
        mass_weights=tuple(float(w) for w in mass_weights) if mass_weights else None,
        mass_kind=MassKind(mass_kind) if mass_kind else None,
        mprime_constant=mprime_constant,
    )


@dataclass(frozen=True)
class StructureReport:
    """Outcome of a sampled structural check; ``worst_violation <= 0`` means held."""

    property: str
    samples_tested: int
    worst_violation: float
    witness: Optional[tuple[float, ...]] = None

    @property
    def passed(self) -> bool:
        return self.worst_violation <= 0.0

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "samples_tested": self.samples_tested,
            "worst_violation": self.worst_violation,
            "witness": list(self.witness) if self.witness is not None else None,
            "passed": self.passed,
        }


def check_quasi_positivity(
    system: ReactionSystem,
    n_samples: int,
    seed: int,
    box: float = 10.0,
) -> StructureReport:
    """Screen condition (P): ``f_i >= 0`` whenever the i-th argument is zero.

    Samples states uniformly from ``[0, box]^m``, zeroes each coordinate in
    turn and records the largest observed ``-f_i``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    worst = -math.inf
    witness = None
    for _ in range(int(n_samples)):
        r = rng.uniform(0.0, box, size=system.m)
        for i in range(system.m):
            probe = r.copy()
            probe[i] = 0.0
            violation = -eval_reaction(system, probe)[i]
            if violation > worst:
                worst = violation
                witness = tuple(probe)
    return StructureReport(
        property="P",
        samples_tested=int(n_samples),
        worst_violation=float(worst),
        witness=witness if worst > 0.0 else None,
    )


def check_mass_control(
    system: ReactionSystem,
    weights,
    kind,
    n_samples: int,
    seed: int,
    C: Optional[float] = None,
    box: float = 10.0,
) -> StructureReport:
    """Screen condition (M) or (M').

    Kind ``M``: worst observed ``sum_i a_i f_i(r)``.  Kind ``Mprime``:
    worst observed ``sum_i a_i f_i(r) - C*(1 + sum_i r_i)``; ``C`` defaults
    to the system's declared constant (0 if none declared).
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    kind = MassKind(kind)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (system.m,):
        raise ValueError(
            f"weights must have shape ({system.m},), got {weights.shape}"
        )
    if np.any(weights <= 0.0):
        raise ValueError("weights must be strictly positive")
    if kind is MassKind.MPRIME:
        if C is None:
            C = system.mprime_constant if system.mprime_constant is not None else 0.0
        C = float(C)
    rng = np.random.default_rng(seed)
    worst = -math.inf
    witness = None
    for _ in range(int(n_samples)):
        r = rng.uniform(0.0, box, size=system.m)
        total = float(weights @ eval_reaction(system, r))
        if kind is MassKind.MPRIME:
            total -= C * (1.0 + float(np.sum(r)))
        if total > worst:
            worst = total
            witness = tuple(r)
    return StructureReport(
        property=kind.value,
        samples_tested=int(n_samples),
        worst_violation=float(worst),
        witness=witness if worst > 0.0 else None,
    )
