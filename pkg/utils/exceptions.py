"""
Custom exceptions for the factor-model library.

Every failure raised by the numerical modules derives from
:class:`FactorModelError`, so callers can catch the whole family at once
while still distinguishing the failing stage through the subclass.
"""


class FactorModelError(Exception):
    """
    Base exception for all factor-model errors.

    :ivar message: Human-readable error message
    :ivar field: Optional name of the offending input field
    """

    def __init__(self, message: str, *, field: str | None = None):
        self.message = message
        self.field = field
        super().__init__(self.message)


class InvalidSpecError(FactorModelError):
    """Raised when model dimensions violate 0 < d < q <= r <= n or similar rules."""

    def __init__(self, message: str = "Invalid model specification", *, field: str | None = None):
        super().__init__(message, field=field)


class DimensionMismatchError(FactorModelError):
    """Raised when an array does not have the shape implied by the model specification."""

    def __init__(self, field: str, expected: tuple[int, ...], got: tuple[int, ...]):
        self.expected = expected
        self.got = got
        super().__init__(f"{field}: expected shape {expected}, got {got}", field=field)


class PreprocessError(FactorModelError):
    """
    Raised when a series cannot be transformed, aggregated or detrended.

    :ivar index: Position of the offending observation, when there is one
    """

    def __init__(self, message: str, *, index: int | None = None, field: str | None = None):
        self.index = index
        if index is not None:
            message = f"{message} (index {index})"
        super().__init__(message, field=field)


class FilterError(FactorModelError):
    """Raised by the Kalman recursions when the innovation covariance breaks down at time t."""

    def __init__(self, t: int, reason: str = "innovation covariance is not finite"):
        self.t = t
        super().__init__(f"Kalman filter failed at t={t}: {reason}")


class ConvergenceError(FactorModelError):
    """Raised when an iteration exhausts its budget; carries the last residual norm."""

    def __init__(self, message: str, *, residual: float, iterations: int):
        self.residual = residual
        self.iterations = iterations
        super().__init__(f"{message} (residual={residual:.3e} after {iterations} iterations)")


class LikelihoodDecreaseError(FactorModelError):
    """Raised when an EM iteration lowers the log-likelihood beyond the numerical slack."""

    def __init__(self, iteration: int, previous: float, current: float):
        self.iteration = iteration
        self.previous = previous
        self.current = current
        super().__init__(
            f"log-likelihood decreased at iteration {iteration}: {previous:.10g} -> {current:.10g}"
        )


class SelectionError(FactorModelError):
    """Raised when a model-selection criterion cannot be evaluated."""


class OracleError(FactorModelError):
    """Raised when the dense joint-Gaussian oracle cannot be assembled or conditioned."""


class PanelFormatError(FactorModelError):
    """
    Raised when a CSV panel is malformed.

    :ivar row: 1-based data row of the offending cell, if known
    :ivar column: Column header of the offending cell, if known
    """

    def __init__(self, message: str, *, row: int | None = None, column: str | None = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column!r}")
        if location:
            message = f"{message} at {', '.join(location)}"
        super().__init__(message, field=column)


class PipelineStageError(FactorModelError):
    """
    Raised by the orchestrator when a stage fails.

    :ivar stage: Stage name (``preprocess``, ``select``, ``fit``...)
    :ivar exit_code: Process exit code associated with the stage
    :ivar cause: Original exception
    """

    def __init__(self, stage: str, exit_code: int, cause: Exception | None = None):
        self.stage = stage
        self.exit_code = exit_code
        self.cause = cause
        detail = f": {cause}" if cause is not None else ""
        super().__init__(f"stage '{stage}' failed{detail}")
