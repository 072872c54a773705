"""
Monte Carlo acceptance checks on synthetic data.

These exercise whole estimation paths at moderate scale and take minutes
rather than seconds; run them with ``pytest -m slow``.
"""

from unittest.mock import Mock

import numpy as np
import pytest

from em.runner import run_em
from kalman.filter import kf_forward
from kalman.riccati import burn_in_index, riccati_steady_state
from kalman.smoother import ks_backward, mse_traces
from kalman.state_space import build_state_space, diffuse_initial_state
from modelselect.report import select_model
from preprocess.detrend import detrend
from simulate.dgp import DGPConfig, gen_dfm
from simulate.metrics import aligned_factor_error, trace_r2
from simulate.oracle import oracle_conditional_moments
from tests.conftest import simulate_state_space
from trendcycle.decomposition import decompose_factors
from trendcycle.spectral import spectral_report
from utils.constants import DeterministicKind
from utils.model import ModelSpec, Params

pytestmark = pytest.mark.slow


def _random_system(rng: np.random.Generator) -> tuple[Params, ModelSpec]:
    """Stable two-factor system with at most eight states."""
    n = int(rng.integers(2, 7))
    q = int(rng.integers(1, 3))
    T = int(rng.integers(5, 16))
    rho = np.zeros(n, dtype=int)
    rho[rng.choice(n, size=int(rng.integers(0, min(n, 4) + 1)), replace=False)] = 1
    R = rng.uniform(0.3, 1.0, n)
    R[rho == 1] = rng.uniform(0.05, 0.2, int(rho.sum()))
    params = Params(
        Lambda=rng.standard_normal((n, 2)),
        A1=np.diag(rng.uniform(-0.5, 0.5, 2)),
        A2=0.1 * np.eye(2),
        H=rng.standard_normal((2, q)),
        R=R,
        rho=rho,
        floor=np.full(n, 0.05),
    )
    return params, ModelSpec(n=n, T=T, r=2, q=q)


class TestKalmanAcceptance:
    """Recursions against dense conditioning and steady-state behaviour."""

    @pytest.mark.parametrize("variant", ["dk_no_inverse", "classic_pinv"])
    def test_random_systems_match_oracle(self, variant, silent_logger):
        """Test 25 random systems against the joint-Gaussian posterior."""
        rng = np.random.default_rng(2024)
        for _ in range(25):
            params, spec = _random_system(rng)
            ss = build_state_space(params, spec)
            assert ss.m <= 8
            X = simulate_state_space(ss, spec.T, rng)
            init = diffuse_initial_state(ss, 10.0)
            filtered = kf_forward(ss, X, init)
            smoothed = ks_backward(filtered, ss, variant, logger=silent_logger)
            oracle = oracle_conditional_moments(ss, X, init)
            np.testing.assert_allclose(smoothed.means, oracle.means, atol=1e-7)
            np.testing.assert_allclose(smoothed.covs, oracle.covs, atol=1e-7)
            np.testing.assert_allclose(smoothed.lag1[1:], oracle.lag1[1:], atol=1e-7)
            assert filtered.loglik == pytest.approx(oracle.loglik, rel=1e-9)

    def test_filtered_uncertainty_halves_when_n_doubles(self):
        """Test that the steady-state factor MSE scales like 1/n."""
        rng = np.random.default_rng(8)
        Lambda = rng.standard_normal((200, 2))
        traces = {}
        for n in (100, 200):
            params = Params(
                Lambda=Lambda[:n],
                A1=np.diag([0.5, 0.3]),
                A2=np.zeros((2, 2)),
                H=np.eye(2),
                R=np.ones(n),
                rho=np.zeros(n, dtype=int),
                floor=np.full(n, 1e-4),
            )
            ss = build_state_space(params, ModelSpec(n=n, T=10, r=2, q=2))
            steady = riccati_steady_state(ss)
            traces[n] = np.trace(steady.P_filt[:2, :2])
        assert 1.4 <= traces[100] / traces[200] <= 2.6

    def test_fitted_run_reaches_steady_state_early(self, silent_logger):
        """Test MSE ordering and a burn-in within the first tenth of the sample."""
        X, _ = gen_dfm(DGPConfig(n=30, T=200, q=2, d=1, s=0, seed=21))
        spec = ModelSpec(n=30, T=200, r=2, q=2, em_max_iter=20, em_min_iter=2)
        state, _ = run_em(X, spec, logger=silent_logger)
        ss = build_state_space(state.params, spec)
        filtered = kf_forward(ss, X, diffuse_scale=spec.diffuse_scale)
        smoothed = ks_backward(filtered, ss, logger=silent_logger)
        steady = riccati_steady_state(ss, P0=filtered.init.cov)
        burn_in = burn_in_index(filtered.P_pred, steady.P_pred)
        assert burn_in is not None
        assert burn_in <= 20

        traces = mse_traces(filtered, smoothed, spec.r)[burn_in:]
        tol = 1e-9 * np.maximum(1.0, traces[:, 0])
        assert np.all(traces[:, 1] <= traces[:, 0] + tol)
        assert np.all(traces[:, 2] <= traces[:, 1] + tol)


class TestEstimationAcceptance:
    """EM monotonicity, convergence and the effect of unrestricted loadings."""

    @pytest.mark.parametrize("seed", range(20))
    def test_em_monotone_with_reduced_rank_shocks(self, seed, silent_logger):
        """Test monotone ℓ and convergence with r = 4 factors driven by q = 2 shocks."""
        X, _ = gen_dfm(DGPConfig(n=50, T=150, q=2, d=1, s=1, seed=seed))
        spec = ModelSpec(
            n=50, T=150, r=4, q=2, d=1, em_tol=1e-6, em_max_iter=500, loglik_slack=1e-8
        )
        state, _ = run_em(X, spec, logger=silent_logger)
        path = state.loglik_path
        assert np.all(np.diff(path) >= -1e-8 * np.abs(path[:-1]))
        assert state.converged
        assert state.delta_l < 1e-6
        assert state.k <= 500

    @pytest.mark.parametrize("seed", range(6))
    def test_em_survives_large_reduced_rank_panels(self, seed, silent_logger):
        """Test that r = 2q fits at n = 100, T = 400 run without a likelihood failure."""
        X, _ = gen_dfm(DGPConfig(n=100, T=400, q=2, d=1, s=1, seed=seed))
        spec = ModelSpec(n=100, T=400, r=4, q=2, d=1, em_max_iter=60)
        state, _ = run_em(X, spec, logger=silent_logger)
        path = state.loglik_path
        assert np.all(np.diff(path) >= -spec.loglik_slack * np.abs(path[:-1]))

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_em_monotone_and_converges(self, seed, silent_logger):
        """Test that every update raises the likelihood and Δℓ < 1e-6 is reached."""
        X, _ = gen_dfm(DGPConfig(n=30, T=100, q=2, d=1, s=0, seed=seed))
        spec = ModelSpec(n=30, T=100, r=2, q=2, em_tol=1e-6, em_max_iter=500, loglik_slack=1e-8)
        state, _ = run_em(X, spec, logger=silent_logger)
        path = state.loglik_path
        assert np.all(np.diff(path) >= -1e-8 * np.abs(path[:-1]))
        assert state.converged
        assert state.delta_l < 1e-6

    def test_shared_common_component_recovered(self, silent_logger):
        """Test that two series with one true common component get close estimates."""
        X, truth = gen_dfm(DGPConfig(n=20, T=200, q=2, d=1, s=0, seed=13))
        X = X.copy()
        X[1] = truth.chi[0] + truth.xi[1]
        spec = ModelSpec(n=20, T=200, r=2, q=2, em_max_iter=30)
        _, estimates = run_em(X, spec, logger=silent_logger)
        d_chi = np.diff(estimates.chi[0] - estimates.chi[1])
        d_x = np.diff(X[0] - X[1])
        assert np.std(d_chi) < 0.2 * np.std(d_x)


class TestFactorRecoveryAcceptance:
    """Consistency of the smoothed factors as the panel grows."""

    REPLICATIONS = 50

    @staticmethod
    def _fit(n: int, T: int, seed: int, logger) -> tuple[float, float]:
        X, truth = gen_dfm(DGPConfig(n=n, T=T, q=2, d=1, s=1, seed=seed))
        spec = ModelSpec(n=n, T=T, r=4, q=2, d=1, em_tol=1e-5, em_max_iter=100)
        _, estimates = run_em(X, spec, logger=logger)
        error, _ = aligned_factor_error(truth.F, estimates.factors, start=T // 10)
        return error, trace_r2(truth.F, estimates.factors)

    def test_error_shrinks_with_n_and_T(self, silent_logger):
        """Test the median aligned error ratio and trace-R² over the (n, T) grid."""
        small = [self._fit(25, 100, seed, silent_logger) for seed in range(self.REPLICATIONS)]
        large = [
            self._fit(100, 400, 1000 + seed, silent_logger) for seed in range(self.REPLICATIONS)
        ]
        small_error = np.median([error for error, _ in small])
        large_error = np.median([error for error, _ in large])
        assert small_error / large_error >= 1.3
        assert np.median([r2 for _, r2 in large]) >= 0.95


class TestTrendCycleAcceptance:
    """Cycle recovery and spectral ordering on a panel with a dominant cycle."""

    @pytest.fixture(scope="class")
    def fitted(self):
        cfg = DGPConfig(n=100, T=300, q=2, d=1, s=1, dominant_cycle=True, snr=2.0, seed=41)
        X, truth = gen_dfm(cfg)
        spec = ModelSpec(n=100, T=300, r=4, q=2, d=1, em_tol=1e-6, em_max_iter=200)
        logger = Mock()
        state, estimates = run_em(X, spec, logger=logger)
        tc = decompose_factors(estimates.factors, 2, 1, logger=logger)
        return truth, state.params, tc

    def test_output_cycle_recovered(self, fitted):
        """Test that the common cycle of the output series tracks the true cycle."""
        truth, params, tc = fitted
        start = 30
        estimated = (params.Lambda[0] @ tc.cycle_part)[start:]
        true_cycle = truth.chi_cycle[0, start:]
        assert np.corrcoef(estimated, true_cycle)[0, 1] > 0.9

    def test_trend_growth_dominates_low_frequencies(self, fitted):
        """Test that ΔT̂ has more power than every cycle below π/10."""
        _, _, tc = fitted
        report = spectral_report(tc)
        low = report.frequencies < np.pi / 10
        assert low.sum() > 5
        assert np.all(report.trends[:, low].min(axis=0) > report.cycles[:, low].max(axis=0))

    def test_residual_cycles_smallest(self, fitted):
        """Test that residual cycles carry the least variance of the three groups."""
        _, _, tc = fitted
        variances = spectral_report(tc).variances
        assert variances["residual_cycles"] < variances["cycles"]
        assert variances["residual_cycles"] < variances["trends"]


class TestSelectionAcceptance:
    """Model selection on panels of empirical size."""

    def test_dimensions_recovered(self, silent_logger):
        """Test q = 3, one common trend and r = 6 in at least 90% of 50 replications."""
        hits = {"q": 0, "trend": 0, "r": 0}
        seeds = range(100, 150)
        for seed in seeds:
            X, _ = gen_dfm(DGPConfig(n=100, T=230, q=3, d=2, s=1, seed=seed))
            report = select_model(X, logger=silent_logger)
            hits["q"] += report.q_hat == 3
            hits["trend"] += report.trend_count_hat == 1
            hits["r"] += report.r_hat == 6
            assert np.all(np.diff(report.table.static) >= 0)
        for name, count in hits.items():
            assert count >= 0.9 * len(seeds), name


class TestDetrendAcceptance:
    """Operating characteristics of the automatic detrending rule."""

    def test_drifting_walks_keep_trend(self):
        """Test that random walks with drift select trend mode."""
        rng = np.random.default_rng(31)
        chosen = [
            detrend(np.cumsum(0.5 + rng.standard_normal(200)))[0].mode_used
            for _ in range(200)
        ]
        share = np.mean([mode is DeterministicKind.TREND for mode in chosen])
        assert share >= 0.95

    def test_driftless_walks_keep_mean(self):
        """Test that random walks without drift mostly select mean mode."""
        rng = np.random.default_rng(32)
        chosen = [
            detrend(np.cumsum(rng.standard_normal(200)))[0].mode_used for _ in range(200)
        ]
        share = np.mean([mode is DeterministicKind.MEAN for mode in chosen])
        assert share >= 0.95
