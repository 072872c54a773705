"""
Unit tests for the em package: starting values, E/M steps and the EM loop.
"""

import numpy as np
import pytest

from em.initialization import init_pca, observation_floors, pca_factors, shock_loading
from em.runner import (
    common_components,
    relative_change,
    run_em,
    step_with_halving,
    tie_initial_rows,
)
from em.steps import blend_params, e_step, m_step
from simulate.dgp import DGPConfig, gen_dfm
from simulate.metrics import trace_r2
from utils.exceptions import InvalidSpecError, LikelihoodDecreaseError, PreprocessError
from utils.model import ModelSpec

pytestmark = pytest.mark.unit


@pytest.fixture
def static_spec(dgp_static) -> ModelSpec:
    """Specification matching ``dgp_static`` with a short EM budget."""
    return ModelSpec(
        n=dgp_static.n, T=dgp_static.T, r=2, q=2, em_tol=1e-5, em_max_iter=60
    )


class TestInitialization:
    """Tests for the principal-component starting values."""

    def test_pca_factors(self, simulated_static):
        """Test loadings normalization and the zero first factor value."""
        X, _ = simulated_static
        Lambda, F = pca_factors(X, 2)
        assert Lambda.shape == (20, 2)
        assert F.shape == (2, 80)
        np.testing.assert_array_equal(F[:, 0], 0.0)
        np.testing.assert_allclose(Lambda.T @ Lambda / 20, np.eye(2), atol=1e-10)
        assert np.all(Lambda[0] >= 0)

    def test_init_pca_shapes(self, simulated_static, static_spec):
        """Test the shapes and positivity of Θ_0."""
        X, _ = simulated_static
        params = init_pca(X, static_spec)
        assert params.Lambda.shape == (20, 2)
        assert params.A1.shape == params.A2.shape == (2, 2)
        assert params.H.shape == (2, 2)
        assert np.all(params.R >= params.floor)
        np.testing.assert_array_equal(params.rho, 0)

    def test_init_pca_rejects_nan(self, simulated_static, static_spec):
        """Test that a missing value is reported with its time index."""
        X = simulated_static[0].copy()
        X[3, 17] = np.nan
        with pytest.raises(PreprocessError) as exc_info:
            init_pca(X, static_spec)
        assert exc_info.value.index == 17

    def test_init_pca_rejects_short_sample(self, rng):
        """Test that T <= r + 2 is refused."""
        spec = ModelSpec(n=6, T=4, r=2, q=1)
        with pytest.raises(InvalidSpecError):
            init_pca(rng.standard_normal((6, 4)), spec)

    def test_shock_loading_full_rank(self):
        """Test that HH' reproduces a full-rank covariance when q = r."""
        sigma = np.array([[2.0, 0.5], [0.5, 1.0]])
        H = shock_loading(sigma, 2)
        np.testing.assert_allclose(H @ H.T, sigma, atol=1e-12)

    def test_shock_loading_reduced_rank(self):
        """Test the best rank-one approximation."""
        sigma = np.diag([4.0, 1.0])
        H = shock_loading(sigma, 1)
        np.testing.assert_allclose(H @ H.T, np.diag([4.0, 0.0]), atol=1e-12)

    def test_observation_floors(self):
        """Test floors for varying and constant-difference series."""
        X = np.vstack([np.array([0.0, 1.0, 0.0, 1.0]), np.arange(4.0)])
        floors = observation_floors(X, 0.01)
        assert floors[0] == pytest.approx(0.01 * np.var([1.0, -1.0, 1.0]))
        assert floors[1] == 0.01


class TestHelpers:
    """Tests for small EM helpers."""

    def test_relative_change(self):
        """Test the symmetric relative change."""
        assert relative_change(-99.0, -101.0) == pytest.approx(2.0 / 200.0)
        assert relative_change(0.0, 0.0) == 0.0

    def test_common_components_tied_rows_bitwise(self, rng):
        """Test that equal loading rows give bitwise equal common components."""
        Lambda = rng.standard_normal((4, 3))
        Lambda[2] = Lambda[0]
        F = rng.standard_normal((3, 50))
        chi = common_components(Lambda, F)
        assert np.array_equal(chi[0], chi[2])
        np.testing.assert_allclose(chi, Lambda @ F, atol=1e-12)

    def test_tie_initial_rows(self, simulated_static, static_spec):
        """Test that starting rows are averaged within a group."""
        params = init_pca(simulated_static[0], static_spec)
        tied = tie_initial_rows(params, {"g": [0, 3]})
        np.testing.assert_array_equal(tied.Lambda[0], tied.Lambda[3])
        np.testing.assert_allclose(tied.Lambda[0], params.Lambda[[0, 3]].mean(axis=0))
        assert tie_initial_rows(params, None) is params


class TestSteps:
    """Tests for one E-step/M-step pair."""

    def test_one_iteration_does_not_lower_likelihood(self, simulated_static, static_spec):
        """Test the ascent property of a single update."""
        X, _ = simulated_static
        params = init_pca(X, static_spec)
        stats, loglik0 = e_step(params, X, static_spec)
        new_params = m_step(stats)
        _, loglik1 = e_step(new_params, X, static_spec)
        assert loglik1 >= loglik0 - 1e-8 * abs(loglik0)

    def test_m_step_ties_rows(self, simulated_static, static_spec, silent_logger):
        """Test that tied loading rows stay identical after an update."""
        X, _ = simulated_static
        params = tie_initial_rows(init_pca(X, static_spec), {"g": [1, 2]})
        stats, _ = e_step(params, X, static_spec)
        new_params = m_step(stats, {"g": [1, 2]}, logger=silent_logger)
        assert np.array_equal(new_params.Lambda[1], new_params.Lambda[2])

    def test_m_step_rejects_bad_group(self, simulated_static, static_spec, silent_logger):
        """Test that a tie group outside the panel is refused."""
        X, _ = simulated_static
        stats, _ = e_step(init_pca(X, static_spec), X, static_spec)
        with pytest.raises(InvalidSpecError):
            m_step(stats, {"g": [0, 99]}, logger=silent_logger)


class TestRunEm:
    """Tests for the EM loop."""

    def test_monotone_and_decomposes(self, simulated_static, static_spec, silent_logger):
        """Test the likelihood path, the stopping rule and χ + ξ = X."""
        X, truth = simulated_static
        state, estimates = run_em(X, static_spec, logger=silent_logger)

        path = state.loglik_path
        assert path.size == state.k + 1
        assert np.all(np.diff(path) >= -static_spec.loglik_slack * np.abs(path[:-1]))
        if state.converged:
            assert state.delta_l < static_spec.em_tol
        assert state.loglik == estimates.loglik

        np.testing.assert_allclose(estimates.chi + estimates.xi, X, atol=1e-10)
        assert estimates.factors.shape == (2, 80)
        assert trace_r2(truth.F, estimates.factors) > 0.8

    def test_minimum_iterations(self, simulated_static, silent_logger):
        """Test that em_min_iter updates are always made."""
        X, _ = simulated_static
        spec = ModelSpec(n=20, T=80, r=2, q=2, em_tol=1.0, em_min_iter=3, em_max_iter=3)
        state, _ = run_em(X, spec, logger=silent_logger)
        assert state.k == 3
        assert state.converged

    def test_budget_exhausted(self, simulated_static, silent_logger):
        """Test that hitting the budget is reported, not raised."""
        X, _ = simulated_static
        spec = ModelSpec(n=20, T=80, r=2, q=2, em_tol=1e-14, em_min_iter=1, em_max_iter=2)
        state, _ = run_em(X, spec, logger=silent_logger)
        assert state.k == 2
        assert not state.converged
        silent_logger.warning.assert_called()

    def test_tied_common_components_bitwise(self, simulated_static, static_spec, silent_logger):
        """Test that a tie group yields identical loadings and common components."""
        X, _ = simulated_static
        state, estimates = run_em(X, static_spec, {"gdo": [4, 9]}, logger=silent_logger)
        assert np.array_equal(state.params.Lambda[4], state.params.Lambda[9])
        assert np.array_equal(estimates.chi[4], estimates.chi[9])

    def test_random_walk_idiosyncratic(self, silent_logger):
        """Test estimation with frozen I(1) flags."""
        cfg = DGPConfig(n=15, T=80, q=2, d=1, s=0, i1_share=0.2, seed=5)
        X, truth = gen_dfm(cfg)
        spec = ModelSpec(n=15, T=80, r=2, q=2, em_max_iter=5)
        state, estimates = run_em(X, spec, rho=truth.rho, logger=silent_logger)
        np.testing.assert_array_equal(state.params.rho, truth.rho)
        assert np.all(state.params.R[truth.rho == 1] >= state.params.floor[truth.rho == 1])
        assert estimates.F_smoothed.shape == (80, 4 + 3)
        np.testing.assert_allclose(estimates.chi + estimates.xi, X, atol=1e-10)


class TestStepHalving:
    """Tests for shortened EM updates."""

    @pytest.fixture
    def fitted(self, simulated_static, static_spec, silent_logger):
        X, _ = simulated_static
        state, _ = run_em(X, static_spec, logger=silent_logger)
        return X, state.params

    def test_blend_full_step_is_candidate(self, fitted):
        """Test that a unit weight returns the candidate itself."""
        _, params = fitted
        candidate = params.with_updates(R=2.0 * params.R)
        assert blend_params(params, candidate, 1.0) is candidate

    def test_blend_is_linear(self, fitted):
        """Test the halfway point of loadings, VAR, R and HH'."""
        _, params = fitted
        candidate = params.with_updates(
            Lambda=-params.Lambda, A1=0.5 * params.A1, R=3.0 * params.R, H=2.0 * params.H
        )
        half = blend_params(params, candidate, 0.5)
        np.testing.assert_allclose(half.Lambda, 0.0, atol=1e-14)
        np.testing.assert_allclose(half.A1, 0.75 * params.A1)
        np.testing.assert_allclose(half.R, 2.0 * params.R)
        np.testing.assert_allclose(half.shock_cov, 2.5 * params.shock_cov, rtol=1e-10)

    def test_blend_keeps_ties_and_floor(self, simulated_static, static_spec, silent_logger):
        """Test that tied rows stay bitwise equal and R stays above its floor."""
        X, _ = simulated_static
        params = tie_initial_rows(init_pca(X, static_spec), {"g": [1, 2]})
        stats, _ = e_step(params, X, static_spec)
        candidate = m_step(stats, {"g": [1, 2]}, logger=silent_logger)
        blended = blend_params(params, candidate, 0.25)
        assert np.array_equal(blended.Lambda[1], blended.Lambda[2])
        assert np.all(blended.R >= blended.floor)

    def test_blend_rejects_zero_weight(self, fitted):
        """Test that a zero step is refused."""
        _, params = fitted
        with pytest.raises(InvalidSpecError):
            blend_params(params, params, 0.0)

    def test_bad_update_is_shortened(self, fitted, static_spec, silent_logger):
        """Test that an update lowering the likelihood is halved until ℓ holds."""
        X, params = fitted
        spec = static_spec.with_updates(loglik_slack=1e-3)
        _, previous = e_step(params, X, spec)
        candidate = params.with_updates(R=4.0 * params.R)
        _, worse = e_step(candidate, X, spec)
        assert worse < previous - spec.loglik_slack * abs(previous)

        accepted, out = step_with_halving(
            params, candidate, X, spec, previous, 1, logger=silent_logger
        )
        assert out.loglik >= previous - spec.loglik_slack * abs(previous)
        assert np.all(accepted.R < candidate.R)
        silent_logger.warning.assert_called()

    def test_good_update_is_kept(self, simulated_static, static_spec, silent_logger):
        """Test that an ascent step passes through unchanged."""
        X, _ = simulated_static
        params = init_pca(X, static_spec)
        stats, previous = e_step(params, X, static_spec)
        candidate = m_step(stats)
        accepted, out = step_with_halving(
            params, candidate, X, static_spec, previous, 1, logger=silent_logger
        )
        assert accepted is candidate
        assert out.loglik >= previous - static_spec.loglik_slack * abs(previous)

    def test_exhausted_halvings_raise(self, fitted, static_spec, silent_logger):
        """Test that LikelihoodDecreaseError is raised when no step keeps ℓ."""
        X, params = fitted
        _, previous = e_step(params, X, static_spec)
        candidate = params.with_updates(R=4.0 * params.R)
        with pytest.raises(LikelihoodDecreaseError):
            step_with_halving(
                params,
                candidate,
                X,
                static_spec,
                previous,
                3,
                max_halvings=0,
                logger=silent_logger,
            )
