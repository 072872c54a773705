"""
Unit tests for utils/exceptions.py

Tests for the factor-model exception family.
"""

import pytest

from repositories.base import ArtifactNotFoundError
from utils.exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    FactorModelError,
    FilterError,
    InvalidSpecError,
    LikelihoodDecreaseError,
    OracleError,
    PanelFormatError,
    PipelineStageError,
    PreprocessError,
    SelectionError,
)


class TestFactorModelError:
    """Tests for FactorModelError base exception."""

    def test_create_with_message(self):
        """Test creating error with message."""
        error = FactorModelError("Test error")
        assert str(error) == "Test error"
        assert error.message == "Test error"
        assert error.field is None

    def test_create_with_field(self):
        """Test creating error with an offending field."""
        error = FactorModelError("bad value", field="q")
        assert error.field == "q"

    @pytest.mark.parametrize(
        "error",
        [
            InvalidSpecError(),
            DimensionMismatchError("A1", (2, 2), (3, 3)),
            PreprocessError("bad"),
            FilterError(3),
            ConvergenceError("stuck", residual=1.0, iterations=5),
            LikelihoodDecreaseError(2, -10.0, -11.0),
            SelectionError("no q"),
            OracleError("too big"),
            PanelFormatError("bad cell"),
            PipelineStageError("fit", 13),
            ArtifactNotFoundError("out"),
        ],
    )
    def test_subclasses_share_base(self, error):
        """Test that every library error derives from FactorModelError."""
        assert isinstance(error, FactorModelError)


class TestSpecificErrors:
    """Tests for messages and attributes of the specific errors."""

    def test_invalid_spec_default_message(self):
        """Test the default message of InvalidSpecError."""
        assert str(InvalidSpecError()) == "Invalid model specification"

    def test_dimension_mismatch(self):
        """Test that shapes appear in the message."""
        error = DimensionMismatchError("Lambda", (5, 2), (5, 3))
        assert error.expected == (5, 2)
        assert error.got == (5, 3)
        assert error.field == "Lambda"
        assert "(5, 2)" in str(error) and "(5, 3)" in str(error)

    def test_preprocess_error_with_index(self):
        """Test that the offending index is appended."""
        error = PreprocessError("log of a nonpositive value", index=7)
        assert error.index == 7
        assert str(error) == "log of a nonpositive value (index 7)"

    def test_filter_error(self):
        """Test that the failing time index is reported."""
        error = FilterError(12, "singular")
        assert error.t == 12
        assert str(error) == "Kalman filter failed at t=12: singular"

    def test_convergence_error_carries_residual(self):
        """Test that the residual and iteration count are kept."""
        error = ConvergenceError("Riccati recursion did not converge", residual=0.5, iterations=9)
        assert error.residual == 0.5
        assert error.iterations == 9
        assert "after 9 iterations" in str(error)

    def test_likelihood_decrease(self):
        """Test the recorded likelihood values."""
        error = LikelihoodDecreaseError(4, -100.0, -100.5)
        assert (error.iteration, error.previous, error.current) == (4, -100.0, -100.5)
        assert "iteration 4" in str(error)

    def test_panel_format_location(self):
        """Test that row and column are appended to the message."""
        error = PanelFormatError("missing value", row=3, column="gdp")
        assert str(error) == "missing value at row 3, column 'gdp'"
        assert error.field == "gdp"

    def test_pipeline_stage_error(self):
        """Test that the stage, exit code and cause are kept."""
        cause = SelectionError("q_max must be below n")
        error = PipelineStageError("select", 12, cause)
        assert error.stage == "select"
        assert error.exit_code == 12
        assert error.cause is cause
        assert str(error) == "stage 'select' failed: q_max must be below n"

    def test_artifact_not_found(self, tmp_path):
        """Test the missing-file detail of ArtifactNotFoundError."""
        error = ArtifactNotFoundError(tmp_path, "params/A1.csv")
        assert error.location == tmp_path
        assert error.missing == "params/A1.csv"
        assert "missing params/A1.csv" in str(error)
