"""
Number of static factors by matching explained-variance shares.

The share of the variance of Δx explained by the first q dynamic principal
components is compared with the shares of the static principal components;
r is the smallest count whose static share reaches the dynamic one.
"""

from __future__ import annotations

import numpy as np

from modelselect.spectral import spectral_density_eigs, standardize_rows
from modelselect.types import ExplainedVariance, RSelection, SpectralEstimate
from utils.constants import TOL_SHARE
from utils.exceptions import SelectionError
from utils.linalg import leading_eigh
from utils.logging_interfaces import LoggerProtocol


def cumulative_shares(eigenvalues: np.ndarray, total: float) -> np.ndarray:
    """Cumulative percentage of ``total``, clipped to [0, 100]."""
    if total <= 0:
        return np.zeros(len(eigenvalues))
    shares = 100.0 * np.cumsum(np.maximum(eigenvalues, 0.0)) / total
    return np.clip(np.maximum.accumulate(shares), 0.0, 100.0)


def explained_variance(dX: np.ndarray, spec_est: SpectralEstimate, k: int) -> ExplainedVariance:
    """
    Table of cumulative explained variance for k = 1..k.

    :param dX: n×(T-1) differenced panel
    :param spec_est: Spectral estimate of the same standardized panel
    """
    Z = standardize_rows(dX)
    n = Z.shape[0]
    k = min(k, n, spec_est.k)
    corr = np.atleast_2d(Z @ Z.T / Z.shape[1])
    static_vals, _ = leading_eigh(corr, k)
    dynamic = cumulative_shares(spec_est.average_eigenvalues()[:k], spec_est.average_trace())
    static = cumulative_shares(static_vals, float(np.trace(corr)))
    return ExplainedVariance(dynamic=dynamic, static=static)


def match_explained_variance(
    q_row: np.ndarray, r_row: np.ndarray, q_hat: int, tol_share: float = TOL_SHARE
) -> int | None:
    """
    Smallest r >= q_hat whose static share is within ``tol_share`` points of the
    dynamic share of ``q_hat`` components, or None.

    With the shares (33.4, 45.8, 53.3) and (23.4, 33.9, 42.1, 47.9, 51.8, 55.3)
    and q_hat = 3 this returns 6.
    """
    if q_hat <= 0 or q_hat > len(q_row):
        return None
    target = float(q_row[q_hat - 1]) - tol_share
    for r in range(max(q_hat, 1), len(r_row) + 1):
        if r_row[r - 1] >= target:
            return r
    return None


def select_r(
    X: np.ndarray,
    q_hat: int,
    r_max: int,
    tol_share: float = TOL_SHARE,
    *,
    spec_est: SpectralEstimate | None = None,
    logger: LoggerProtocol | None = None,
) -> RSelection:
    """
    Number of static factors.

    :param X: n×T levels panel
    :param q_hat: Selected number of dynamic shocks
    :param r_max: Largest admissible r
    :param tol_share: Matching tolerance in percentage points
    :param spec_est: Precomputed spectral estimate of Δx
    :raises SelectionError: If ``r_max`` is below ``q_hat``
    """
    if logger is None:
        from utils.logger import log as logger

    if r_max < q_hat:
        raise SelectionError(f"r_max={r_max} is below q_hat={q_hat}", field="r_max")
    dX = np.diff(np.atleast_2d(np.asarray(X, dtype=float)), axis=1)
    if spec_est is None:
        spec_est = spectral_density_eigs(dX, subsamples=1)
    table = explained_variance(dX, spec_est, max(r_max, q_hat, 1))

    warnings: list[str] = []
    if q_hat == 0:
        message = "q_hat is 0, so r_hat is 0"
        logger.warning(message)
        return RSelection(r_hat=0, table=table, matched=False, warnings=(message,))

    r_hat = match_explained_variance(table.dynamic, table.static[:r_max], q_hat, tol_share)
    matched = r_hat is not None
    if r_hat is None:
        r_hat = r_max
        message = (
            f"no r <= {r_max} explains {table.dynamic[q_hat - 1]:.1f}% "
            f"within {tol_share} points; using r_max"
        )
        logger.warning(message)
        warnings.append(message)
    logger.debug(f"select_r: r_hat={r_hat}")
    return RSelection(r_hat=r_hat, table=table, matched=matched, warnings=tuple(warnings))
