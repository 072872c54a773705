"""
Spectral densities of the extracted trends and cycles.
"""

from __future__ import annotations

import numpy as np

from trendcycle.types import SpectralReport, TCDecomposition
from utils.spectral import lag_window_density


def univariate_densities(Y: np.ndarray, bandwidth: int, frequencies: np.ndarray) -> np.ndarray:
    """Bartlett-smoothed spectral density of every row of Y, k×F."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if Y.shape[0] == 0:
        return np.zeros((0, frequencies.size))
    return np.vstack(
        [lag_window_density(row[None, :], bandwidth, frequencies)[:, 0, 0].real for row in Y]
    )


def spectral_report(tc: TCDecomposition, bandwidth: int | None = None) -> SpectralReport:
    """
    Densities of ΔT_t, ΔC_t and the differenced residual cycles on ``2πj/T``, j = 0..T/2.

    :param bandwidth: Truncation lag; ``floor(√T)`` by default
    """
    T = tc.trends.shape[1]
    M = int(np.floor(np.sqrt(T))) if bandwidth is None else int(bandwidth)
    frequencies = 2.0 * np.pi * np.arange(T // 2 + 1) / T

    def _density(block: np.ndarray) -> np.ndarray:
        return univariate_densities(np.diff(block, axis=1), M, frequencies)

    def _variance(block: np.ndarray) -> float:
        return float(np.sum(np.var(block, axis=1))) if block.size else 0.0

    return SpectralReport(
        frequencies=frequencies,
        bandwidth=M,
        trends=_density(tc.trends),
        cycles=_density(tc.cycles),
        residual_cycles=_density(tc.residual_cycles),
        variances={
            "trends": _variance(tc.trends),
            "cycles": _variance(tc.cycles),
            "residual_cycles": _variance(tc.residual_cycles),
        },
    )
