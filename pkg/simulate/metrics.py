"""
Rotation-invariant recovery metrics for estimated factors and loadings.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg


def _center(A: np.ndarray) -> np.ndarray:
    return A - A.mean(axis=1, keepdims=True)


def trace_r2(F_true: np.ndarray, F_hat: np.ndarray) -> float:
    """
    Trace R² of the multivariate regression of the true factors on the estimates.

    Both inputs are k×T; series are demeaned first. Equals 1 iff span(F_true)
    lies in span(F_hat).
    """
    F = _center(np.asarray(F_true, dtype=float))
    G = _center(np.asarray(F_hat, dtype=float))
    fitted = F @ G.T @ linalg.pinv(G @ G.T) @ G
    total = float(np.trace(F @ F.T))
    return float(np.trace(fitted @ F.T)) / total if total > 0 else 0.0


def aligned_factor_error(
    F_true: np.ndarray, F_hat: np.ndarray, start: int = 0
) -> tuple[float, np.ndarray]:
    """
    Root-mean-square of ``F̂_t - K̂ F_t`` over t >= start, K̂ by least squares.

    :return: (error, K̂)
    """
    F = np.asarray(F_true, dtype=float)[:, start:]
    G = np.asarray(F_hat, dtype=float)[:, start:]
    K_hat = G @ F.T @ linalg.pinv(F @ F.T)
    resid = G - K_hat @ F
    return float(np.sqrt(np.mean(np.sum(resid**2, axis=0)))), K_hat


def max_principal_angle(A: np.ndarray, B: np.ndarray) -> float:
    """Largest principal angle (radians) between the column spans of A and B."""
    return float(np.max(linalg.subspace_angles(A, B)))
