"""
Lag-window (Bartlett) spectral density estimation for multivariate series.
"""

from __future__ import annotations

import numpy as np


def autocovariances(Y: np.ndarray, max_lag: int) -> np.ndarray:
    """
    Sample autocovariances Γ(h) = T⁻¹ Σ_t y_{t+h} y_t' of the demeaned series.

    :param Y: k×T data
    :return: (max_lag+1)×k×k array
    """
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    Y = Y - Y.mean(axis=1, keepdims=True)
    T = Y.shape[1]
    return np.stack([Y[:, h:] @ Y[:, : T - h].T / T for h in range(max_lag + 1)])


def bartlett_weights(bandwidth: int) -> np.ndarray:
    """``1 - h/(M+1)`` for h = 0..M."""
    return 1.0 - np.arange(bandwidth + 1) / (bandwidth + 1)


def fourier_frequencies(bandwidth: int) -> np.ndarray:
    """Nonnegative half of the 2M+1 frequencies ``2πj/(2M+1)``, j = 0..M."""
    return 2.0 * np.pi * np.arange(bandwidth + 1) / (2 * bandwidth + 1)


def lag_window_density(
    Y: np.ndarray, bandwidth: int, frequencies: np.ndarray | None = None
) -> np.ndarray:
    """
    Bartlett lag-window estimate of the spectral density matrix::

        Σ(ω) = (2π)⁻¹ Σ_{|h|<=M} (1 - |h|/(M+1)) Γ(h) e^{-ihω}

    :param Y: k×T data
    :param bandwidth: Truncation lag M
    :param frequencies: Evaluation points; the Fourier frequencies of M by default
    :return: F×k×k Hermitian matrices
    """
    if frequencies is None:
        frequencies = fourier_frequencies(bandwidth)
    gammas = autocovariances(Y, bandwidth)
    weights = bartlett_weights(bandwidth)
    lags = np.arange(1, bandwidth + 1)
    phases = np.exp(-1j * np.outer(frequencies, lags)) * weights[1:]
    A = np.einsum("fh,hab->fab", phases, gammas[1:])
    density = gammas[0][None, :, :] + A + np.conj(np.swapaxes(A, 1, 2))
    return density / (2.0 * np.pi)
