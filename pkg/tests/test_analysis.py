"""Norms, inequality checks, decay fits and the comparison harness."""

import numpy as np
import pytest

from fracrd import (
    ScalarField,
    apply_sfl,
    decay_exponent,
    eigenfunction,
    eigenvalue,
    fit_decay_window,
    impulse_decay_study,
    interpolation_check,
    lp_norm,
    run_comparison_pair,
    semigroup_apply,
    stroock_varopoulos_check,
)

from gridutil import make_grid, random_field


class TestLpNorm:
    def test_constant_field(self):
        grid = make_grid("neumann", (20,), axes=((0.0, 2.5),))
        field = ScalarField(grid, np.full(20, -3.0))
        for p in (1.0, 2.0, 4.0):
            expected = (3.0**p * 2.5) ** (1.0 / p)
            assert lp_norm(field, p).value == pytest.approx(expected, rel=1e-12)
        assert lp_norm(field, np.inf).value == 3.0

    def test_normalized_eigenfunction_l2(self):
        grid = make_grid("dirichlet", (64,))
        report = lp_norm(eigenfunction(grid, 1), 2.0)
        assert report.value == pytest.approx(1.0, abs=2e-3)
        assert report.quadrature == "rectangle"

    def test_sup_norm_is_exact_max(self, rng):
        grid = make_grid("dirichlet", (16,))
        field = random_field(grid, rng)
        assert lp_norm(field, np.inf).value == np.max(np.abs(field.values))

    def test_rejects_small_p(self):
        grid = make_grid("dirichlet", (4,))
        with pytest.raises(ValueError, match="p="):
            lp_norm(ScalarField(grid, np.ones(4)), 0.5)

    def test_monotone_in_magnitude(self, rng):
        grid = make_grid("dirichlet", (16,))
        small = random_field(grid, rng)
        big = ScalarField(grid, small.values * 2.0)
        for p in (1.0, 2.0, np.inf):
            assert lp_norm(small, p).value <= lp_norm(big, p).value


class TestInterpolationCheck:
    def test_equal_orders_give_zero_slack(self, rng):
        grid = make_grid("dirichlet", (32,))
        field = random_field(grid, rng)
        report = interpolation_check(field, 0.5, 0.5, p=2.0)
        assert abs(report.slack) <= 1e-12 * report.rhs
        assert report.passed

    def test_single_mode_is_tight(self):
        grid = make_grid("dirichlet", (32,))
        e3 = eigenfunction(grid, 3)
        report = interpolation_check(e3, 0.3, 0.7, p=2.0)
        # lambda^s1 = (lambda^s2)^(s1/s2) for a one-term sum.
        assert abs(report.slack) <= 1e-10 * report.rhs

    def test_random_fields_never_fail_at_p2(self):
        grid = make_grid("dirichlet", (64,))
        rng = np.random.default_rng(2024)
        for _ in range(100):
            field = random_field(grid, rng)
            report = interpolation_check(field, 0.3, 0.7, p=2.0)
            assert report.slack >= -1e-12 * report.rhs

    def test_other_p_uses_loose_tolerance(self, rng):
        grid = make_grid("dirichlet", (64,))
        field = random_field(grid, rng)
        report = interpolation_check(field, 0.3, 0.7, p=4.0)
        assert report.tol == pytest.approx(1e-6 * report.rhs)

    def test_rejects_disordered_orders(self, rng):
        grid = make_grid("dirichlet", (8,))
        field = random_field(grid, rng)
        with pytest.raises(ValueError, match="s1 <= s2"):
            interpolation_check(field, 0.7, 0.3)


class TestDecayExponent:
    def test_planted_power_law(self):
        t = np.logspace(-2, 1, 30)
        series = list(zip(t, t**-2.0))
        assert decay_exponent(series) == pytest.approx(-2.0, abs=1e-10)

    def test_constant_series(self):
        t = np.logspace(0, 1, 10)
        series = list(zip(t, np.ones(10)))
        assert decay_exponent(series) == pytest.approx(0.0, abs=1e-12)

    def test_input_validation(self):
        with pytest.raises(ValueError, match="at least 5"):
            decay_exponent([(1.0, 1.0)] * 4)
        t = [1.0, 2.0, 3.0, 4.0, 5.0]
        with pytest.raises(ValueError, match="positive"):
            decay_exponent(list(zip(t, [1.0, 1.0, -1.0, 1.0, 1.0])))
        with pytest.raises(ValueError, match="increasing"):
            decay_exponent(list(zip([1.0, 2.0, 2.0, 3.0, 4.0], np.ones(5))))

    def test_window_fit_picks_clean_decade(self):
        # Smooth saturation followed by a power law: the windowed fit must
        # settle on the asymptotic decade, not the curved knee.
        t = np.logspace(-3, 2, 120)
        norms = 5.0 * (1.0 + t / 0.1) ** -1.5
        fit = fit_decay_window(t, norms)
        assert fit.slope == pytest.approx(-1.5, rel=0.05)
        assert fit.window[0] > 1.0

    def test_impulse_decay_study_small(self):
        # Half-width 10% criterion at modest resolution; the acceptance
        # suite repeats this at K=1024.
        grid = make_grid("dirichlet", (256,))
        fit = impulse_decay_study(grid, s=0.5)
        target = -1.0 / (2 * 0.5)
        assert abs((fit.slope - target) / target) < 0.1


class TestComparisonHarness:
    def test_equal_problems_have_zero_gap(self, rng):
        grid = make_grid("dirichlet", (16,))
        w0 = ScalarField(grid, np.abs(random_field(grid, rng).values))
        report = run_comparison_pair(
            0.5, 1.0, grid, 0.05, w0, w0, None, None, t_end=0.5
        )
        assert report.lhs == pytest.approx(0.0, abs=1e-14)
        assert report.passed

    def test_zero_vs_nonnegative(self):
        grid = make_grid("dirichlet", (32,))
        zero = ScalarField(grid, np.zeros(32))
        z0 = ScalarField(grid, np.sin(grid.nodes[0]) ** 2)
        report = run_comparison_pair(
            0.5, 1.0, grid, 0.05, zero, z0, None, None, t_end=0.5
        )
        assert report.passed

    def test_ordered_sources_keep_margin(self):
        grid = make_grid("dirichlet", (32,))
        e1_plus = ScalarField(grid, np.maximum(eigenfunction(grid, 1).values, 0.0))
        z0 = ScalarField(grid, e1_plus.values + 0.1)
        report = run_comparison_pair(
            0.5, 1.0, grid, 0.05, e1_plus, z0,
            np.zeros(32), np.full(32, 0.05), t_end=0.5,
        )
        assert report.passed
        assert report.lhs < 0.0  # strictly positive gap throughout

    def test_precondition_rejected(self, rng):
        grid = make_grid("dirichlet", (16,))
        w0 = ScalarField(grid, np.ones(16))
        z0 = ScalarField(grid, np.zeros(16))
        with pytest.raises(ValueError, match="w0 <= z0"):
            run_comparison_pair(0.5, 1.0, grid, 0.1, w0, z0, None, None, 0.5)
        with pytest.raises(ValueError, match="h <= g"):
            run_comparison_pair(
                0.5, 1.0, grid, 0.1, z0, w0,
                np.ones(16), np.zeros(16), 0.5,
            )


class TestStroockVaropoulos:
    def test_neumann_constant_is_degenerate(self):
        grid = make_grid("neumann", (16,), axes=((0.0, 1.0),))
        field = ScalarField(grid, np.full(16, 2.0))
        report = stroock_varopoulos_check(field, s=0.5, q=2.0)
        assert report.lhs == pytest.approx(0.0, abs=1e-12)
        assert report.rhs == pytest.approx(0.0, abs=1e-12)

    def test_single_mode_pairing_against_quadrature_oracle(self):
        # u = c*e_1 > 0 on (0, pi): <A^s u, u^q> must equal
        # c^(q+1) * lambda_1^s * h * sum(e_1^(q+1)) computed independently.
        grid = make_grid("dirichlet", (64,))
        c, s, q = 0.7, 0.5, 2.0
        e1 = eigenfunction(grid, 1)
        field = ScalarField(grid, c * e1.values)
        lam1 = eigenvalue(grid.domain, 1)
        h = grid.spacing[0]
        oracle = c ** (q + 1) * lam1**s * h * np.sum(e1.values ** (q + 1))
        pairing = h * np.sum(apply_sfl(field, s).values * field.values**q)
        assert pairing == pytest.approx(oracle, rel=1e-10)
        report = stroock_varopoulos_check(field, s=s, q=q)
        assert report.rhs == pytest.approx(oracle, rel=1e-10)

    def test_positive_part_diagnostic_is_reported(self):
        # Soft diagnostic: record the outcome, do not demand it.
        grid = make_grid("dirichlet", (64,))
        plus = ScalarField(grid, np.maximum(eigenfunction(grid, 1).values, 0.0))
        report = stroock_varopoulos_check(plus, s=0.5, q=2.0)
        assert np.isfinite(report.slack)
        print(f"stroock-varopoulos diagnostic: slack={report.slack:.3e} "
              f"(tol {report.tol:.3e}, passed={report.passed})")

    def test_parameter_validation(self):
        grid = make_grid("dirichlet", (8,))
        field = ScalarField(grid, np.ones(8))
        with pytest.raises(ValueError, match="q="):
            stroock_varopoulos_check(field, s=0.5, q=1.0)
        with pytest.raises(ValueError, match="s="):
            stroock_varopoulos_check(field, s=1.0, q=2.0)
