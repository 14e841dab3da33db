"""Shared grid/field constructors for the test suite."""

import numpy as np

from fracrd import BoundaryCondition, Domain, ScalarField, build_grid


def make_grid(bc="dirichlet", modes=(8,), axes=((0.0, np.pi),)):
    return build_grid(Domain(tuple(axes), BoundaryCondition(bc)), tuple(modes))


def random_field(grid, rng, scale=1.0):
    return ScalarField(grid, scale * rng.standard_normal(grid.shape))
