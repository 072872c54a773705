"""
Spectral-density eigenvalues of the differenced panel.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg

from modelselect.types import SpectralEstimate
from utils.constants import SELECTION_SUBSAMPLES, SPECTRAL_TOP_K
from utils.exceptions import SelectionError
from utils.spectral import fourier_frequencies, lag_window_density


def default_bandwidth(T: int) -> int:
    """``floor(0.75 √T)``, at least 1."""
    return max(int(np.floor(0.75 * np.sqrt(T))), 1)


def standardize_rows(Y: np.ndarray) -> np.ndarray:
    """Demean each row and scale it to unit variance; constant rows are only demeaned."""
    Y = np.asarray(Y, dtype=float)
    centered = Y - Y.mean(axis=1, keepdims=True)
    std = centered.std(axis=1, keepdims=True)
    return centered / np.where(std > 0, std, 1.0)


def nested_fractions(subsamples: int) -> np.ndarray:
    """``1 - 0.1(J - j)`` for j = 1..J, the full panel last."""
    return 1.0 - 0.1 * (subsamples - np.arange(1, subsamples + 1))


def nested_shape(n: int, T: int, fraction: float) -> tuple[int, int]:
    return max(int(np.floor(fraction * n)), 1), max(int(np.floor(fraction * T)), 2)


def _estimate(dX: np.ndarray, bandwidth: int, k: int) -> SpectralEstimate:
    n, T = dX.shape
    frequencies = fourier_frequencies(bandwidth)
    density = lag_window_density(dX, bandwidth, frequencies)
    eigenvalues = np.empty((frequencies.size, k))
    traces = np.empty(frequencies.size)
    for f, S in enumerate(density):
        vals = linalg.eigvalsh(0.5 * (S + S.conj().T))
        vals = np.maximum(np.sort(vals.real)[::-1], 0.0)
        eigenvalues[f] = vals[:k]
        traces[f] = max(float(np.trace(S).real), 0.0)
    return SpectralEstimate(
        frequencies=frequencies,
        eigenvalues=eigenvalues,
        traces=traces,
        bandwidth=bandwidth,
        n=n,
        T=T,
    )


def spectral_density_eigs(
    dX: np.ndarray,
    bandwidth: int | None = None,
    k: int | None = None,
    *,
    standardize: bool = True,
    subsamples: int = SELECTION_SUBSAMPLES,
) -> SpectralEstimate:
    """
    Top eigenvalues of the Bartlett lag-window spectral density of Δx.

    The density is evaluated on ``2πj/(2M+1)``, j = 0..M. Nested sub-panels
    (first ⌊f·n⌋ series, first ⌊f·T⌋ periods, f = 0.6, 0.7, ..., 1.0 for five
    subsamples) are estimated with the same bandwidth rule and attached to the
    result for the stability scan of :func:`modelselect.criteria.select_q`.

    :param dX: n×(T-1) differenced panel
    :param bandwidth: Truncation lag M; ``floor(0.75 √T)`` when omitted
    :param k: Number of eigenvalues kept per frequency; ``min(n, 20)`` by default
    :param standardize: Scale each series to unit variance first
    :param subsamples: Number of nested sub-panels, the full panel included
    :raises SelectionError: If the bandwidth is not below T
    """
    dX = np.atleast_2d(np.asarray(dX, dtype=float))
    n, T = dX.shape
    M = default_bandwidth(T) if bandwidth is None else int(bandwidth)
    if M >= T:
        raise SelectionError(f"bandwidth {M} must be below T={T}", field="bandwidth")
    if M < 0:
        raise SelectionError("bandwidth must be nonnegative", field="bandwidth")
    k = min(n, SPECTRAL_TOP_K) if k is None else min(int(k), n)
    if standardize:
        dX = standardize_rows(dX)

    nested: list[SpectralEstimate] = []
    if subsamples > 1:
        for fraction in nested_fractions(subsamples)[:-1]:
            n_j, T_j = nested_shape(n, T, fraction)
            M_j = min(M if bandwidth is not None else default_bandwidth(T_j), T_j - 1)
            nested.append(_estimate(dX[:n_j, :T_j], M_j, min(k, n_j)))

    full = _estimate(dX, M, k)
    return SpectralEstimate(
        frequencies=full.frequencies,
        eigenvalues=full.eigenvalues,
        traces=full.traces,
        bandwidth=full.bandwidth,
        n=n,
        T=T,
        subsamples=tuple(nested),
    )
