"""
Result types of the model-selection criteria.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SpectralEstimate:
    """
    Leading eigenvalues of the lag-window spectral density of a standardized panel.

    Frequencies cover the nonnegative half of the 2M+1 Fourier frequencies;
    averages over the full symmetric grid count every ω > 0 twice.

    :ivar frequencies: M+1 frequencies in [0, π)
    :ivar eigenvalues: (M+1)×k top eigenvalues, descending per frequency
    :ivar traces: Trace of the density matrix at each frequency
    :ivar bandwidth: Truncation lag M
    :ivar n: Number of series
    :ivar T: Number of observations of the differenced panel
    :ivar subsamples: Estimates on nested sub-panels, smallest first
    """

    frequencies: np.ndarray
    eigenvalues: np.ndarray
    traces: np.ndarray
    bandwidth: int
    n: int
    T: int
    subsamples: tuple[SpectralEstimate, ...] = ()

    @property
    def k(self) -> int:
        return self.eigenvalues.shape[1]

    def _frequency_weights(self) -> np.ndarray:
        weights = np.full(self.frequencies.size, 2.0)
        weights[0] = 1.0
        return weights / (2 * self.bandwidth + 1)

    def average_eigenvalues(self) -> np.ndarray:
        """Average of each eigenvalue over the 2M+1 frequencies."""
        return self._frequency_weights() @ self.eigenvalues

    def average_trace(self) -> float:
        return float(self._frequency_weights() @ self.traces)


@dataclass(frozen=True)
class StabilityScan:
    """
    Estimates of a count as a function of the penalty multiplier c.

    :ivar c_grid: Penalty multipliers, increasing
    :ivar counts: J×len(c_grid) estimates, one row per nested sub-panel (full panel last)
    :ivar stability: Variance of the estimates across sub-panels, per c
    :ivar chosen: Index into ``c_grid`` of the selected multiplier
    """

    c_grid: np.ndarray
    counts: np.ndarray
    stability: np.ndarray
    chosen: int

    @property
    def path(self) -> np.ndarray:
        """Full-panel estimate per c."""
        return self.counts[-1]

    @property
    def c(self) -> float:
        return float(self.c_grid[self.chosen])


@dataclass(frozen=True)
class QSelection:
    """
    Number of dynamic shocks.

    :ivar q_hat: Selected q, clamped to ``q_max``
    :ivar raw: Unclamped criterion value
    :ivar criterion: Information criterion at the chosen c for k = 0..kmax
    :ivar scan: Penalty-multiplier stability scan
    """

    q_hat: int
    raw: int
    criterion: np.ndarray
    scan: StabilityScan
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class TrendSelection:
    """
    Number of common trends q - d.

    :ivar trend_count: Selected count
    :ivar eigenvalues: ν_j of ``(nT²)⁻¹ Σ x_t x_t'`` on the full panel
    :ivar ratios: ν_j / ν_{j+1}
    :ivar scan: Penalty-multiplier stability scan
    """

    trend_count: int
    eigenvalues: np.ndarray
    ratios: np.ndarray
    scan: StabilityScan
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class ExplainedVariance:
    """
    Cumulative percentage of variance explained by the first k components.

    :ivar dynamic: Spectral eigenvalues of Δx (one row per k)
    :ivar static: Covariance eigenvalues of Δx
    """

    dynamic: np.ndarray
    static: np.ndarray


@dataclass(frozen=True)
class RSelection:
    r_hat: int
    table: ExplainedVariance
    matched: bool
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class UnitRootResult:
    """
    ADF test on one idiosyncratic component.

    :ivar series_id: Identifier of the series
    :ivar statistic: ADF statistic, NaN when the component is constant
    :ivar pvalue: MacKinnon approximate p-value
    :ivar used_lag: Lag order picked by BIC
    :ivar rho: Final flag after overrides
    :ivar overridden: Whether metadata forced the flag
    """

    series_id: str
    statistic: float
    pvalue: float
    used_lag: int
    rho: int
    overridden: bool = False


@dataclass(frozen=True)
class RhoClassification:
    rho: np.ndarray
    results: tuple[UnitRootResult, ...]


@dataclass(frozen=True)
class SelectionReport:
    """
    Resolved model dimensions.

    :ivar q_hat: Dynamic shocks
    :ivar trend_count_hat: Common trends q - d
    :ivar r_hat: Static factors
    :ivar d_hat: Cointegration deficit ``q_hat - trend_count_hat``
    :ivar table: Explained-variance table
    :ivar rho: I(1) idiosyncratic flags
    :ivar rho_results: Per-series unit-root tests
    :ivar overrides: Dimensions fixed by the user instead of estimated
    :ivar warnings: Clamps and criterion warnings
    """

    q_hat: int
    trend_count_hat: int
    r_hat: int
    d_hat: int
    table: ExplainedVariance | None
    rho: np.ndarray
    rho_results: tuple[UnitRootResult, ...] = ()
    overrides: dict[str, int] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    @property
    def is_admissible(self) -> bool:
        """``0 < d < q <= r``, the range the estimation stage accepts."""
        return 0 < self.d_hat < self.q_hat <= self.r_hat
