"""
Unit tests for utils/config.py and pipeline/config.py

Tests for process settings (pydantic-settings) and run configuration.
"""

from pathlib import Path

import pytest
from pydantic import ValidationError

from pipeline.config import EMIT_FLAGS, EmitFlags, RunConfig
from preprocess.types import SeriesMeta
from strategies.factory import SmootherVariant
from utils.config import Settings, SingletonSettingsMeta
from utils.exceptions import InvalidSpecError


class TestSettings:
    """Tests for Settings configuration class."""

    def test_settings_has_defaults(self):
        """Test that Settings has expected defaults."""
        settings = Settings()
        assert settings.LOG_LEVEL == "INFO"
        assert settings.LOG_FILE == "logs/dfm.log"
        assert settings.LOG_ROTATION == "10 MB"
        assert settings.LOG_RETENTION == "7 days"
        assert settings.OUTPUT_DIR is None

    def test_output_dir_from_env(self, monkeypatch):
        """Test that OUTPUT_DIR is read from the environment."""
        monkeypatch.setenv("OUTPUT_DIR", "/tmp/dfm-out")
        assert Settings().OUTPUT_DIR == "/tmp/dfm-out"

    def test_blank_output_dir_is_unset(self, monkeypatch):
        """Test that an empty OUTPUT_DIR counts as unset."""
        monkeypatch.setenv("OUTPUT_DIR", "  ")
        assert Settings().OUTPUT_DIR is None

    def test_invalid_rotation_rejected(self, monkeypatch):
        """Test that a malformed LOG_ROTATION fails validation."""
        monkeypatch.setenv("LOG_ROTATION", "ten megabytes")
        with pytest.raises(ValidationError):
            Settings()

    def test_invalid_retention_unit_rejected(self, monkeypatch):
        """Test that an unknown LOG_RETENTION unit fails validation."""
        monkeypatch.setenv("LOG_RETENTION", "7 fortnights")
        with pytest.raises(ValidationError):
            Settings()

    def test_settings_repr(self):
        """Test Settings string representation."""
        repr_str = repr(Settings())
        assert "Settings" in repr_str
        assert "OUTPUT_DIR" in repr_str


class TestSingletonPattern:
    """Tests for Singleton pattern implementation."""

    def test_singleton_returns_same_instance(self):
        """Test that multiple instantiations return same instance."""
        assert Settings() is Settings()
        assert Settings.get_instance() is Settings()

    def test_class_level_attribute_access(self):
        """Test that fields can be read from the class itself."""
        assert Settings.LOG_LEVEL == Settings().LOG_LEVEL

    def test_reset_reloads_environment(self, monkeypatch):
        """Test that reset() picks up a changed environment."""
        first = Settings()
        monkeypatch.setenv("OUTPUT_DIR", "elsewhere")
        SingletonSettingsMeta.reset()
        second = Settings()
        assert first is not second
        assert second.OUTPUT_DIR == "elsewhere"


class TestRunConfig:
    """Tests for RunConfig validation and loading."""

    def test_defaults(self):
        """Test the defaults of a bare configuration."""
        config = RunConfig()
        assert config.q is None and config.r is None and config.d is None
        assert config.smoother == SmootherVariant.DK_NO_INVERSE
        assert config.emit.enabled() == list(EMIT_FLAGS)
        assert config.ties == {}

    def test_smoother_parsed_from_string(self):
        """Test that the smoother variant accepts its string value."""
        assert RunConfig(smoother="classic_pinv").smoother == SmootherVariant.CLASSIC_PINV

    def test_unknown_smoother_rejected(self):
        """Test that an unknown smoother variant is rejected."""
        with pytest.raises(ValidationError):
            RunConfig(smoother="fast")

    @pytest.mark.parametrize(
        "values",
        [
            {"q": 3, "r": 2},
            {"q": 2, "d": 2},
            {"em_min_iter": 5, "em_max_iter": 3},
            {"tol_share": 0},
            {"adf_level": 1.5},
            {"q": 0},
        ],
    )
    def test_invalid_values_rejected(self, values):
        """Test that inconsistent settings fail validation."""
        with pytest.raises(ValidationError):
            RunConfig(**values)

    def test_unknown_field_rejected(self):
        """Test that extra fields are forbidden."""
        with pytest.raises(ValidationError):
            RunConfig(colour="blue")

    def test_tie_group_needs_two_members(self):
        """Test that a single-member tie group is rejected."""
        with pytest.raises(ValidationError):
            RunConfig(ties={"gdo": ["gdp"]})

    def test_from_overrides_skips_none(self):
        """Test that None overrides leave defaults untouched."""
        config = RunConfig.from_overrides(q=None, em_tol=1e-4, spectra=False)
        assert config.q is None
        assert config.em_tol == 1e-4
        assert config.emit.spectra is False
        assert config.emit.factors is True

    def test_from_ini(self, tmp_path):
        """Test loading every section of an INI file."""
        path = tmp_path / "run.ini"
        path.write_text(
            "[input]\npanel = data/panel.csv\n\n"
            "[model]\nq = 3\nr = 6\nd = 2\n\n"
            "[algorithm]\nem_tol = 1e-5\nsmoother = classic_pinv\n\n"
            "[emit]\noutput_dir = out\nspectra = false\n\n"
            "[ties]\ngdo = gdp, gdi\n"
        )
        config = RunConfig.from_ini(path)
        assert config.panel == Path("data/panel.csv")
        assert (config.q, config.r, config.d) == (3, 6, 2)
        assert config.em_tol == 1e-5
        assert config.smoother == SmootherVariant.CLASSIC_PINV
        assert config.output_dir == Path("out")
        assert config.emit.spectra is False
        assert config.ties == {"gdo": ["gdp", "gdi"]}

    def test_from_ini_overrides_win(self, tmp_path):
        """Test that keyword overrides replace file values."""
        path = tmp_path / "run.ini"
        path.write_text("[model]\nq = 3\nr = 6\n")
        config = RunConfig.from_ini(path, q=2, r=None)
        assert (config.q, config.r) == (2, 6)

    def test_from_ini_unknown_section(self, tmp_path):
        """Test that an unknown section raises ValueError."""
        path = tmp_path / "run.ini"
        path.write_text("[plots]\ncolour = blue\n")
        with pytest.raises(ValueError, match="unknown config sections"):
            RunConfig.from_ini(path)

    def test_from_ini_unknown_key(self, tmp_path):
        """Test that an unknown key raises ValueError."""
        path = tmp_path / "run.ini"
        path.write_text("[model]\nfactors = 3\n")
        with pytest.raises(ValueError, match="unknown key"):
            RunConfig.from_ini(path)

    def test_output_dir_env_override(self, monkeypatch, tmp_path):
        """Test that OUTPUT_DIR replaces the configured output directory."""
        config = RunConfig(output_dir=Path("configured"))
        assert config.resolved_output_dir == Path("configured")
        monkeypatch.setenv("OUTPUT_DIR", str(tmp_path))
        SingletonSettingsMeta.reset()
        assert config.resolved_output_dir == tmp_path

    def test_summary_is_flat(self):
        """Test that the manifest summary echoes the settings."""
        summary = RunConfig(q=2, r=4).summary()
        assert summary["q"] == "2"
        assert summary["r"] == "4"
        assert summary["d"] == "auto"
        assert summary["smoother"] == "dk_no_inverse"


class TestTieGroups:
    """Tests for merging configured and metadata tie groups."""

    @pytest.fixture
    def metas(self) -> list[SeriesMeta]:
        return [
            SeriesMeta(id="gdp"),
            SeriesMeta(id="gdi"),
            SeriesMeta(id="cons", tie_group="spend"),
            SeriesMeta(id="inv", tie_group="spend"),
            SeriesMeta(id="emp", tie_group="lonely"),
        ]

    def test_config_and_metadata_groups(self, metas):
        """Test that both sources contribute and singletons are dropped."""
        groups = RunConfig(ties={"gdo": ["gdp", "gdi"]}).tie_groups(metas)
        assert groups == {"gdo": [0, 1], "spend": [2, 3]}

    def test_unknown_series(self, metas):
        """Test that a tie on a missing series is rejected."""
        with pytest.raises(InvalidSpecError, match="unknown series"):
            RunConfig(ties={"gdo": ["gdp", "gnp"]}).tie_groups(metas)

    def test_series_in_two_groups(self, metas):
        """Test that overlapping groups are rejected."""
        with pytest.raises(InvalidSpecError, match="is in tie groups"):
            RunConfig(ties={"mixed": ["gdp", "cons"]}).tie_groups(metas)


class TestEmitFlags:
    """Tests for output switches."""

    def test_enabled_lists_true_flags(self):
        """Test that enabled() omits disabled outputs."""
        flags = EmitFlags(spectra=False, seasonality=False)
        enabled = flags.enabled()
        assert "spectra" not in enabled
        assert "seasonality" not in enabled
        assert "factors" in enabled
