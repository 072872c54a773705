"""
Unit tests for the smoother strategies and their factory.
"""

import numpy as np
import pytest

from kalman.filter import kf_forward
from kalman.types import FilterOutput, SmootherOutput
from strategies.base import SmootherConfig, SmootherStrategy
from strategies.classic_strategy import ClassicSmootherStrategy
from strategies.dk_strategy import DurbinKoopmanSmootherStrategy
from strategies.factory import DEFAULT_VARIANT, SmootherStrategyFactory, SmootherVariant
from utils.model import StateSpace

pytestmark = pytest.mark.unit


class TestSmootherVariant:
    """Tests for SmootherVariant parsing."""

    def test_from_string_case_insensitive(self):
        """Test that parsing ignores case."""
        assert SmootherVariant.from_string("DK_NO_INVERSE") == SmootherVariant.DK_NO_INVERSE
        assert SmootherVariant.from_string("classic_pinv") == SmootherVariant.CLASSIC_PINV

    def test_from_string_invalid(self):
        """Test that an unknown name lists the valid ones."""
        with pytest.raises(ValueError, match="dk_no_inverse"):
            SmootherVariant.from_string("rts")

    def test_default(self):
        """Test the default variant."""
        assert DEFAULT_VARIANT == SmootherVariant.DK_NO_INVERSE


class TestSmootherConfig:
    """Tests for SmootherConfig validation."""

    def test_default_limit(self):
        """Test the default condition-number limit."""
        assert SmootherConfig().pinv_cond_limit == 1e10

    def test_limit_must_exceed_one(self):
        """Test that a limit of 1 or below is rejected."""
        with pytest.raises(ValueError):
            SmootherConfig(pinv_cond_limit=1.0)


class TestSmootherStrategyFactory:
    """Tests for SmootherStrategyFactory."""

    def test_create_default(self, silent_logger):
        """Test that the default strategy is the inversion-free one."""
        strategy = SmootherStrategyFactory.create(logger=silent_logger)
        assert isinstance(strategy, DurbinKoopmanSmootherStrategy)
        assert strategy.get_variant_name() == "dk_no_inverse"

    def test_create_from_string(self, silent_logger):
        """Test creating a strategy from its string name."""
        strategy = SmootherStrategyFactory.create("classic_pinv", logger=silent_logger)
        assert isinstance(strategy, ClassicSmootherStrategy)
        assert repr(strategy) == "ClassicSmootherStrategy(variant='classic_pinv')"

    def test_create_passes_config(self, silent_logger):
        """Test that the configuration reaches the strategy."""
        config = SmootherConfig(pinv_cond_limit=1e6)
        strategy = SmootherStrategyFactory.create(
            SmootherVariant.CLASSIC_PINV, config, logger=silent_logger
        )
        assert strategy.config is config

    def test_available_variants(self):
        """Test that both built-in variants are registered."""
        assert set(SmootherStrategyFactory.get_available_variants()) == {
            "classic_pinv",
            "dk_no_inverse",
        }

    def test_register_rejects_non_strategy(self):
        """Test that only SmootherStrategy subclasses can be registered."""
        with pytest.raises(TypeError):
            SmootherStrategyFactory.register_strategy(SmootherVariant.CLASSIC_PINV, dict)

    def test_register_custom_strategy(self, monkeypatch, silent_logger):
        """Test that a registered strategy replaces the built-in one."""

        class EchoStrategy(SmootherStrategy):
            def get_variant_name(self) -> str:
                return "classic_pinv"

            def smooth(self, filtered: FilterOutput, ss: StateSpace) -> SmootherOutput:
                return SmootherOutput(
                    means=filtered.F_filt,
                    covs=filtered.P_filt,
                    lag1=np.zeros_like(filtered.P_filt),
                    variant="echo",
                )

        registry = dict(SmootherStrategyFactory._strategy_registry)
        monkeypatch.setattr(SmootherStrategyFactory, "_strategy_registry", registry)
        SmootherStrategyFactory.register_strategy(SmootherVariant.CLASSIC_PINV, EchoStrategy)
        strategy = SmootherStrategyFactory.create("classic_pinv", logger=silent_logger)
        assert isinstance(strategy, EchoStrategy)


class TestStrategiesAgree:
    """The two recursions must give the same moments."""

    def test_variants_agree(self, small_state_space, small_panel, silent_logger):
        """Test that classic and inversion-free smoothers coincide."""
        filtered = kf_forward(small_state_space, small_panel, diffuse_scale=10.0)
        dk = DurbinKoopmanSmootherStrategy(logger=silent_logger).smooth(
            filtered, small_state_space
        )
        classic = ClassicSmootherStrategy(logger=silent_logger).smooth(
            filtered, small_state_space
        )
        np.testing.assert_allclose(dk.means, classic.means, atol=1e-8)
        np.testing.assert_allclose(dk.covs, classic.covs, atol=1e-8)
        np.testing.assert_allclose(dk.lag1, classic.lag1, atol=1e-8)
        assert classic.warnings == ()

    def test_pseudo_inverse_fallback_warns(self, small_state_space, small_panel, silent_logger):
        """Test that a tiny condition limit forces the pseudo-inverse and records it."""
        filtered = kf_forward(small_state_space, small_panel, diffuse_scale=1e7)
        config = SmootherConfig(pinv_cond_limit=1.0 + 1e-9)
        strategy = ClassicSmootherStrategy(config, logger=silent_logger)
        smoothed = strategy.smooth(filtered, small_state_space)
        assert smoothed.warnings
        assert "pseudo-inverse" in smoothed.warnings[0]
        silent_logger.warning.assert_called()
