"""Eigenbasis transforms: fast path, naive path, and brute-force oracles.

The oracles below evaluate the defining sums with explicit Python loops,
independent of both library code paths.
"""

import numpy as np
import pytest

from fracrd import (
    BoundaryCondition,
    Domain,
    ModeCoeffs,
    ScalarField,
    build_grid,
    eigenfunction,
    forward_transform,
    inverse_transform,
    naive_forward_transform,
    naive_inverse_transform,
)

from gridutil import make_grid, random_field


def sampled_basis(grid, axis):
    """Oracle eigenfunctions e_k(x_j) along one axis, from the closed form."""
    c1, c2 = grid.domain.axes[axis]
    length = c2 - c1
    x = grid.nodes[axis]
    if grid.domain.bc is BoundaryCondition.DIRICHLET:
        ks = range(1, grid.modes_per_axis[axis] + 1)
        return np.array(
            [np.sqrt(2 / length) * np.sin(k * np.pi * (x - c1) / length) for k in ks]
        )
    rows = []
    for k in range(grid.modes_per_axis[axis]):
        if k == 0:
            rows.append(np.full_like(x, np.sqrt(1 / length)))
        else:
            rows.append(np.sqrt(2 / length) * np.cos(k * np.pi * (x - c1) / length))
    return np.array(rows)


def oracle_forward_1d(grid, values):
    """Quadrature of integral(u * e_k) as an explicit double loop."""
    basis = sampled_basis(grid, 0)
    h = grid.spacing[0]
    out = np.zeros(grid.shape[0])
    for k in range(grid.shape[0]):
        acc = 0.0
        for j in range(grid.shape[0]):
            acc += values[j] * basis[k, j]
        out[k] = h * acc
    return out


def oracle_inverse_1d(grid, coeffs):
    basis = sampled_basis(grid, 0)
    out = np.zeros(grid.shape[0])
    for j in range(grid.shape[0]):
        acc = 0.0
        for k in range(grid.shape[0]):
            acc += coeffs[k] * basis[k, j]
        out[j] = acc
    return out


@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
class TestForwardInverse1D:
    def test_eigenfunction_maps_to_unit_vector(self, bc):
        grid = make_grid(bc, (8,))
        for k in grid.mode_indices(0):
            coeffs = forward_transform(eigenfunction(grid, int(k))).coeffs
            expected = np.zeros(8)
            expected[int(k) - grid.mode_indices(0)[0]] = 1.0
            assert np.max(np.abs(coeffs - expected)) < 1e-10

    def test_zero_field(self, bc):
        grid = make_grid(bc, (8,))
        coeffs = forward_transform(ScalarField(grid, np.zeros(8))).coeffs
        assert np.all(coeffs == 0.0)

    def test_forward_matches_loop_oracle(self, bc, rng):
        grid = make_grid(bc, (8,), axes=((0.3, 2.1),))
        field = random_field(grid, rng)
        fast = forward_transform(field).coeffs
        oracle = oracle_forward_1d(grid, field.values)
        assert np.max(np.abs(fast - oracle)) < 1e-12 * max(1.0, np.max(np.abs(oracle)))

    def test_inverse_matches_loop_oracle(self, bc, rng):
        grid = make_grid(bc, (8,), axes=((0.3, 2.1),))
        coeffs = ModeCoeffs(grid, rng.standard_normal(8))
        fast = inverse_transform(coeffs).values
        oracle = oracle_inverse_1d(grid, coeffs.coeffs)
        assert np.max(np.abs(fast - oracle)) < 1e-12 * max(1.0, np.max(np.abs(oracle)))

    def test_round_trip(self, bc, rng):
        grid = make_grid(bc, (33,), axes=((-0.7, 1.9),))
        field = random_field(grid, rng)
        back = inverse_transform(forward_transform(field)).values
        assert np.max(np.abs(back - field.values)) <= 1e-12 * np.max(np.abs(field.values))

    def test_naive_path_agrees_with_fast_path(self, bc, rng):
        grid = make_grid(bc, (17,), axes=((0.0, 1.3),))
        field = random_field(grid, rng)
        fast = forward_transform(field).coeffs
        naive = naive_forward_transform(field).coeffs
        assert np.max(np.abs(fast - naive)) < 1e-12 * max(1.0, np.max(np.abs(fast)))
        coeffs = ModeCoeffs(grid, rng.standard_normal(17))
        assert np.max(
            np.abs(inverse_transform(coeffs).values
                   - naive_inverse_transform(coeffs).values)
        ) < 1e-12 * max(1.0, np.max(np.abs(coeffs.coeffs)))


@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
class TestTransforms2D:
    def test_round_trip(self, bc, rng):
        grid = make_grid(bc, (9, 12), axes=((0.0, 1.0), (-1.0, 2.0)))
        field = random_field(grid, rng)
        back = inverse_transform(forward_transform(field)).values
        assert np.max(np.abs(back - field.values)) <= 1e-12 * np.max(np.abs(field.values))

    def test_eigenfunction_unit_coefficient(self, bc):
        grid = make_grid(bc, (5, 6), axes=((0.0, 1.0), (0.0, 2.0)))
        k0 = grid.mode_indices(0)[0]
        k = (k0 + 2, k0 + 3)
        coeffs = forward_transform(eigenfunction(grid, k)).coeffs
        expected = np.zeros(grid.shape)
        expected[2, 3] = 1.0
        assert np.max(np.abs(coeffs - expected)) < 1e-10

    def test_separability_against_nested_1d(self, bc, rng):
        # The 2-D reconstruction of outer-product coefficients must equal the
        # outer product of the 1-D reconstructions.
        grid2 = make_grid(bc, (7, 9), axes=((0.0, 1.0), (0.5, 2.0)))
        gx = make_grid(bc, (7,), axes=((0.0, 1.0),))
        gy = make_grid(bc, (9,), axes=((0.5, 2.0),))
        a = rng.standard_normal(7)
        b = rng.standard_normal(9)
        outer = np.outer(a, b)
        full = inverse_transform(ModeCoeffs(grid2, outer)).values
        vx = inverse_transform(ModeCoeffs(gx, a)).values
        vy = inverse_transform(ModeCoeffs(gy, b)).values
        assert np.max(np.abs(full - np.outer(vx, vy))) < 1e-12 * np.max(np.abs(full))

    def test_forward_matches_naive(self, bc, rng):
        grid = make_grid(bc, (6, 8), axes=((0.0, 1.0), (0.0, 3.0)))
        field = random_field(grid, rng)
        fast = forward_transform(field).coeffs
        naive = naive_forward_transform(field).coeffs
        assert np.max(np.abs(fast - naive)) < 1e-12 * max(1.0, np.max(np.abs(fast)))


class TestLinearityAndErrors:
    def test_linearity(self, rng):
        grid = make_grid("dirichlet", (16,))
        u = random_field(grid, rng)
        v = random_field(grid, rng)
        combo = ScalarField(grid, 0.7 * u.values - 1.3 * v.values)
        lhs = forward_transform(combo).coeffs
        rhs = 0.7 * forward_transform(u).coeffs - 1.3 * forward_transform(v).coeffs
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1.0, np.max(np.abs(rhs)))

    def test_non_finite_rejected(self):
        grid = make_grid("dirichlet", (4,))
        bad = np.zeros(4)
        bad[2] = np.nan
        with pytest.raises(ValueError, match="non-finite"):
            ScalarField(grid, bad)
        bad[2] = np.inf
        with pytest.raises(ValueError, match="non-finite"):
            ModeCoeffs(grid, bad)

    def test_shape_mismatch_rejected(self):
        grid = make_grid("dirichlet", (4,))
        with pytest.raises(ValueError, match="shape"):
            ScalarField(grid, np.zeros(5))

    def test_quadrature_parseval(self, rng):
        # h * sum(values^2) equals sum(coeffs^2): the basis is orthonormal
        # under the rectangle rule.
        for bc in ("dirichlet", "neumann"):
            grid = make_grid(bc, (24,), axes=((0.0, 1.7),))
            field = random_field(grid, rng)
            coeffs = forward_transform(field).coeffs
            lhs = grid.spacing[0] * np.sum(field.values**2)
            rhs = np.sum(coeffs**2)
            assert lhs == pytest.approx(rhs, rel=1e-12)
