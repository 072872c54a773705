"""
Unit tests for the preprocess package: transforms, aggregation and detrending.
"""

import numpy as np
import pandas as pd
import pytest

from preprocess.detrend import add_back_deterministic, detrend, drift_statistic, fixed_b_factor
from preprocess.panel import preprocess_panel
from preprocess.transforms import aggregate_to_quarterly, apply_transform, winsorize_series
from preprocess.types import PanelData, SeriesMeta
from utils.constants import DeterministicKind, Transform
from utils.exceptions import PreprocessError

pytestmark = pytest.mark.unit


@pytest.fixture
def zero_drift_walk(rng) -> np.ndarray:
    """Random walk bent so that y_T = y_1, giving a drift of exactly zero."""
    y = np.cumsum(rng.standard_normal(60))
    return y - np.linspace(0.0, y[-1] - y[0], y.size)


@pytest.fixture
def trending(rng) -> np.ndarray:
    """Strong linear trend plus white noise."""
    t = np.arange(1, 61, dtype=float)
    return 2.0 + 0.5 * t + 0.1 * rng.standard_normal(60)


class TestApplyTransform:
    """Tests for apply_transform()."""

    def test_none_returns_copy(self):
        """Test that the identity transform does not alias its input."""
        y = np.array([1.0, 2.0, 3.0])
        out = apply_transform(y, Transform.NONE)
        np.testing.assert_array_equal(out, y)
        assert out is not y

    def test_log(self):
        """Test the log transform."""
        np.testing.assert_allclose(apply_transform([1.0, np.e], "log"), [0.0, 1.0])

    def test_dlog_is_one_shorter(self):
        """Test that Δlog drops the first observation."""
        out = apply_transform([1.0, np.e, np.e**3], 2)
        np.testing.assert_allclose(out, [1.0, 2.0])

    @pytest.mark.parametrize("code, expected", [(0, Transform.NONE), ("1", Transform.LOG)])
    def test_numeric_codes(self, code, expected):
        """Test that numeric transform codes are accepted."""
        assert Transform.from_string(code) is expected

    def test_nonpositive_under_log(self):
        """Test that a nonpositive value names its index."""
        with pytest.raises(PreprocessError) as exc_info:
            apply_transform([1.0, 2.0, 0.0, 3.0], Transform.LOG)
        assert exc_info.value.index == 2

    def test_non_finite(self):
        """Test that NaN is refused whatever the transform."""
        with pytest.raises(PreprocessError):
            apply_transform([1.0, np.nan], Transform.NONE)


class TestAggregation:
    """Tests for aggregate_to_quarterly()."""

    def test_quarterly_passthrough(self):
        """Test that quarterly input is returned unchanged."""
        y = np.arange(5.0)
        assert aggregate_to_quarterly(y, "quarterly") is y

    def test_monthly_array(self):
        """Test averaging of consecutive months with a trailing partial quarter."""
        out = aggregate_to_quarterly(np.arange(1.0, 8.0), "monthly")
        np.testing.assert_allclose(out, [2.0, 5.0])

    def test_monthly_series_drops_partial_quarters(self):
        """Test that an incomplete first quarter is dropped."""
        index = pd.date_range("2000-02-01", periods=11, freq="MS")
        out = aggregate_to_quarterly(pd.Series(np.arange(11.0), index=index), "monthly")
        assert list(out.index.astype(str)) == ["2000Q2", "2000Q3", "2000Q4"]
        np.testing.assert_allclose(out.to_numpy(), [3.0, 6.0, 9.0])

    def test_daily_series(self):
        """Test that daily observations are averaged within quarters."""
        index = pd.date_range("2000-01-01", "2000-06-30", freq="D")
        series = pd.Series(np.where(index.quarter == 1, 1.0, 3.0), index=index)
        out = aggregate_to_quarterly(series, "daily")
        np.testing.assert_allclose(out.to_numpy(), [1.0, 3.0])

    def test_daily_array_rejected(self):
        """Test that daily data without dates cannot be aggregated."""
        with pytest.raises(PreprocessError):
            aggregate_to_quarterly(np.ones(90), "daily")

    def test_winsorize_clips_tails(self):
        """Test that the extreme values are pulled to their neighbours."""
        y = np.arange(100.0)
        y[-1] = 1000.0
        out = winsorize_series(y, (0.01, 0.01))
        assert out.max() == 98.0
        assert out.min() == 1.0


class TestDetrend:
    """Tests for detrend() and drift_statistic()."""

    def test_trend_selected(self, trending):
        """Test that a strong drift selects a linear trend."""
        result, resid = detrend(trending)
        assert result.mode_used is DeterministicKind.TREND
        assert result.statistic >= 1.96
        assert result.b_hat == pytest.approx(0.5, abs=0.01)
        np.testing.assert_allclose(resid + result.deterministic(trending.size), trending)

    def test_mean_selected(self, zero_drift_walk):
        """Test that a driftless series keeps mean mode."""
        result, resid = detrend(zero_drift_walk)
        assert result.mode_used is DeterministicKind.MEAN
        assert result.statistic < 1.96
        assert abs(resid.mean()) < 1e-12
        np.testing.assert_allclose(add_back_deterministic(resid, result), zero_drift_walk)

    def test_force_modes(self, trending, zero_drift_walk):
        """Test that forced modes override the statistic."""
        forced_trend, _ = detrend(zero_drift_walk, "force_trend")
        forced_mean, resid = detrend(trending, "force_mean")
        assert forced_trend.mode_used is DeterministicKind.TREND
        assert forced_mean.mode_used is DeterministicKind.MEAN
        assert forced_mean.drift_removed
        np.testing.assert_allclose(resid + forced_mean.deterministic(trending.size), trending)

    def test_mean_mode_without_drift_removal(self, trending):
        """Test that remove_drift=False leaves the drift in the residual."""
        result, resid = detrend(trending, "force_mean", remove_drift=False, demean=False)
        assert not result.drift_removed
        np.testing.assert_array_equal(result.deterministic(trending.size), 0.0)
        np.testing.assert_array_equal(resid, trending)

    def test_too_short(self):
        """Test that fewer than eight observations are refused."""
        with pytest.raises(PreprocessError, match="at least 8"):
            detrend(np.arange(7.0))

    def test_literal_long_run_falls_back(self):
        """Test that a negative literal long-run variance forces mean mode."""
        steps = np.where(np.arange(27) % 2 == 0, 1.0, -1.0)
        y = np.concatenate([[0.0], np.cumsum(steps)])
        statistic, _, negative = drift_statistic(y, kind="literal")
        assert negative
        assert statistic == 0.0
        result, _ = detrend(y, long_run="literal")
        assert result.fell_back
        assert result.mode_used is DeterministicKind.MEAN

    @pytest.mark.parametrize("kind", ["bartlett", "literal"])
    def test_statistic_scale_invariant(self, kind):
        """Test that multiplying a series by c > 0 leaves the drift ratio unchanged."""
        rng = np.random.default_rng(17)
        y = np.cumsum(0.2 + rng.standard_normal(120))
        base, _, _ = drift_statistic(y, kind=kind)
        for c in (1e-3, 2.5, 1e4):
            scaled, _, _ = drift_statistic(c * y, kind=kind)
            assert scaled == pytest.approx(base, rel=1e-10)
        result, _ = detrend(y)
        assert detrend(1e4 * y)[0].mode_used is result.mode_used

    def test_fixed_b_factor(self):
        """Test the small-sample deflation of the Bartlett ratio."""
        assert fixed_b_factor(0.0) == 1.0
        assert fixed_b_factor(0.03) == pytest.approx(1.0 + 2.9694 * 0.03 / 1.96, rel=1e-3)
        assert fixed_b_factor(0.1) > fixed_b_factor(0.03) > 1.0

    def test_bartlett_ratio_deflated(self, trending):
        """Test that the Bartlett ratio equals the raw ratio over the fixed-b factor."""
        dy = np.diff(trending)
        n = dy.size
        J = 2
        centered = dy - dy.mean()
        gammas = [centered[j:] @ centered[: n - j] / n for j in range(J + 1)]
        lrv = gammas[0] + 2.0 * ((2.0 / 3.0) * gammas[1] + (1.0 / 3.0) * gammas[2])
        raw = abs(dy.mean()) / np.sqrt(lrv / n)
        statistic, _, _ = drift_statistic(trending, max_lag=J)
        assert statistic == pytest.approx(raw / fixed_b_factor(3 / n), rel=1e-12)


class TestPreprocessPanel:
    """Tests for preprocess_panel()."""

    @pytest.fixture
    def panel(self, rng, trending) -> PanelData:
        levels = np.exp(0.01 * np.cumsum(rng.standard_normal((3, 60)), axis=1))
        values = np.vstack([levels[0], levels[1], trending])
        metas = (
            SeriesMeta(id="a", transform="log"),
            SeriesMeta(id="b", transform="dlog"),
            SeriesMeta(id="c", transform="none"),
        )
        dates = pd.period_range("1990Q1", periods=60, freq="Q")
        return PanelData(values=values, ids=("a", "b", "c"), dates=dates, metas=metas)

    def test_dlog_aligns_panel(self, panel, silent_logger):
        """Test that a Δlog series drops the first period from every series."""
        out = preprocess_panel(panel, logger=silent_logger)
        assert out.X.shape == (3, 59)
        assert str(out.dates[0]) == "1990Q2"
        np.testing.assert_allclose(out.Y[0], np.log(panel.values[0, 1:]))
        np.testing.assert_allclose(out.Y[2], panel.values[2, 1:])

    def test_additive_identity(self, panel, silent_logger):
        """Test that X plus the deterministic part restores Y."""
        out = preprocess_panel(panel, logger=silent_logger)
        np.testing.assert_allclose(out.X + out.deterministic(), out.Y, atol=1e-12)

    def test_error_names_series(self, panel, silent_logger):
        """Test that a failing series is named in the error."""
        values = panel.values.copy()
        values[0, 5] = -1.0
        bad = PanelData(values=values, ids=panel.ids, dates=panel.dates, metas=panel.metas)
        with pytest.raises(PreprocessError, match="series 'a'") as exc_info:
            preprocess_panel(bad, logger=silent_logger)
        assert exc_info.value.field == "a"
