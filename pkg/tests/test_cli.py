"""
Tests for the command-line interface.
"""

import pytest

from main import build_parser, config_from_args, dgp_from_args, main, parse_ties
from pipeline.manifest import RunManifest
from strategies.factory import SmootherVariant
from utils.constants import ExitCode


class TestParser:
    """Tests for argument parsing."""

    @pytest.mark.unit
    def test_run_flags(self, tmp_path):
        """Test that flags land on RunConfig fields."""
        args = build_parser().parse_args(
            [
                "fit",
                "--panel",
                "p.csv",
                "--q",
                "3",
                "--em-max-iter",
                "50",
                "--smoother",
                "classic_pinv",
                "--no-spectra",
                "--no-demean",
                "--tie",
                "gdo=gdp,gdi",
                "--output-dir",
                str(tmp_path),
            ]
        )
        config = config_from_args(args)
        assert config.q == 3
        assert config.em_max_iter == 50
        assert config.smoother is SmootherVariant.CLASSIC_PINV
        assert not config.emit.spectra
        assert config.emit.trends
        assert not config.demean
        assert config.ties == {"gdo": ["gdp", "gdi"]}

    @pytest.mark.unit
    def test_config_file_with_override(self, tmp_path):
        """Test that flags win over INI values."""
        ini = tmp_path / "run.ini"
        ini.write_text("[algorithm]\nem_max_iter = 40\nem_tol = 1e-5\n", encoding="utf-8")
        args = build_parser().parse_args(["select", "--config", str(ini), "--em-max-iter", "9"])
        config = config_from_args(args)
        assert config.em_max_iter == 9
        assert config.em_tol == 1e-5

    @pytest.mark.unit
    def test_parse_ties(self):
        """Test GROUP=ID,ID parsing and its error."""
        assert parse_ties(["a=x, y", "b=z,w"]) == {"a": ["x", "y"], "b": ["z", "w"]}
        with pytest.raises(ValueError):
            parse_ties(["nogroup"])


class TestMain:
    """Tests for main() exit codes."""

    @pytest.mark.unit
    def test_unknown_command(self):
        """Test that argparse errors give the usage code."""
        assert main(["estimate"]) == ExitCode.USAGE

    @pytest.mark.unit
    def test_invalid_setting(self, tmp_path):
        """Test that a rejected setting gives the usage code."""
        code = main(["fit", "--em-tol", "-1", "--output-dir", str(tmp_path)])
        assert code == ExitCode.USAGE

    @pytest.mark.unit
    def test_bad_tie(self, tmp_path):
        """Test that a malformed tie gives the usage code."""
        assert main(["fit", "--tie", "broken", "--output-dir", str(tmp_path)]) == ExitCode.USAGE

    @pytest.mark.unit
    def test_fit_without_panel(self, tmp_path):
        """Test that a missing panel fails the input stage."""
        assert main(["fit", "--output-dir", str(tmp_path)]) == ExitCode.INPUT
        assert RunManifest.read(tmp_path).exit_code == ExitCode.INPUT

    @pytest.mark.unit
    def test_simulate_invalid_dimensions(self, tmp_path):
        """Test that r = q(s+1) above n is refused with the simulate code."""
        code = main(
            ["simulate", "--n", "3", "--T", "40", "--q", "2", "--d", "1"]
            + ["--output-dir", str(tmp_path)]
        )
        assert code == ExitCode.SIMULATE

    @pytest.mark.unit
    def test_dominant_cycle_flags(self):
        """Test that the dominant-cycle switches reach DGPConfig."""
        args = build_parser().parse_args(
            ["simulate", "--n", "8", "--T", "40", "--q", "2", "--d", "1"]
            + ["--dominant-cycle", "--cycle-ar", "0.3", "--residual-scale", "0.1"]
        )
        cfg = dgp_from_args(args)
        assert cfg.dominant_cycle
        assert cfg.cycle_ar == 0.3
        assert cfg.residual_scale == 0.1
        assert cfg.cycle_scale == 1.0

    @pytest.mark.integration
    def test_simulate_dominant_cycle(self, tmp_path):
        """Test that the dominant-cycle design writes its residual block."""
        argv = ["simulate", "--n", "8", "--T", "40", "--q", "2", "--d", "1", "--dominant-cycle"]
        assert main(argv + ["--output-dir", str(tmp_path)]) == ExitCode.OK
        assert (tmp_path / "truth" / "common_residual_cycle.csv").is_file()

    @pytest.mark.integration
    def test_simulate_is_deterministic(self, tmp_path):
        """Test that one seed writes identical panels."""
        base = ["simulate", "--n", "8", "--T", "40", "--q", "2", "--d", "1", "--seed", "5"]
        assert main(base + ["--output-dir", str(tmp_path / "a")]) == ExitCode.OK
        assert main(base + ["--output-dir", str(tmp_path / "b")]) == ExitCode.OK
        for name in ("panel.csv", "metadata.csv", "truth/factors.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    @pytest.mark.integration
    def test_simulate_then_fit(self, tmp_path):
        """Test the full command sequence on a simulated panel."""
        sim = tmp_path / "sim"
        run = tmp_path / "run"
        argv = ["simulate", "--n", "10", "--T", "50", "--q", "2", "--d", "1", "--seed", "2"]
        assert main(argv + ["--output-dir", str(sim)]) == ExitCode.OK
        fit = [
            "fit",
            "--panel",
            str(sim / "panel.csv"),
            "--metadata",
            str(sim / "metadata.csv"),
            "--q",
            "2",
            "--r",
            "4",
            "--d",
            "1",
            "--em-max-iter",
            "2",
            "--loglik-slack",
            "0.05",
            "--output-dir",
            str(run),
        ]
        assert main(fit) == ExitCode.OK
        assert (run / "model" / "spec.json").is_file()
        assert main(["report", str(run), "--output-dir", str(tmp_path / "rep")]) == ExitCode.OK
        assert (tmp_path / "rep" / "selection.json").is_file()
