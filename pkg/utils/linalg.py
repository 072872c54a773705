"""
Small dense linear-algebra helpers shared by the estimation modules.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg


def symmetrize(P: np.ndarray) -> np.ndarray:
    """Return ``(P + P')/2`` over the last two axes."""
    return 0.5 * (P + np.swapaxes(P, -1, -2))


def fix_signs(V: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    V = np.array(V, dtype=float, copy=True)
    if V.size == 0:
        return V
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def fix_first_row_positive(V: np.ndarray) -> np.ndarray:
    """
    Flip columns so the first row is positive; columns with a zero first
    entry fall back to :func:`fix_signs`.
    """
    V = fix_signs(V)
    if V.size == 0:
        return V
    signs = np.where(V[0] < 0, -1.0, 1.0)
    return V * signs


def leading_eigh(S: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Leading ``k`` eigenpairs of a symmetric matrix, in descending order.

    :return: ``(eigenvalues[k], eigenvectors[:, k])``
    """
    vals, vecs = linalg.eigh(symmetrize(S))
    order = np.argsort(vals)[::-1]
    return vals[order][:k], vecs[:, order][:, :k]


def orthogonal_complement(V: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(V)``."""
    return linalg.null_space(V.T)


def companion(coefs: list[np.ndarray]) -> np.ndarray:
    """Companion matrix ``[[A1 ... Ap], [I 0]]`` of a VAR(p)."""
    k = coefs[0].shape[0]
    p = len(coefs)
    C = np.zeros((k * p, k * p))
    C[:k, :] = np.hstack(coefs)
    if p > 1:
        C[k:, :-k] = np.eye(k * (p - 1))
    return C


def spectral_radius(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(linalg.eigvals(M))))


@dataclass(frozen=True)
class VarFit:
    """
    Least-squares VAR(p) without intercept.

    :ivar coefs: Lag matrices ``[A1, ..., Ap]``
    :ivar residuals: k×(T-p) residual series
    :ivar sigma: Residual covariance, residual cross-product over T-p
    """

    coefs: list[np.ndarray]
    residuals: np.ndarray
    sigma: np.ndarray

    @property
    def companion(self) -> np.ndarray:
        return companion(self.coefs)

    @property
    def spectral_radius(self) -> float:
        return spectral_radius(self.companion)

    @property
    def is_stable(self) -> bool:
        return self.spectral_radius < 1.0


def fit_var(Y: np.ndarray, p: int = 2) -> VarFit:
    """
    Fit ``Y_t = A1 Y_{t-1} + ... + Ap Y_{t-p} + e_t`` by least squares.

    :param Y: k×T data matrix
    :param p: Lag order
    """
    k, T = Y.shape
    if T <= p:
        raise ValueError(f"VAR({p}) needs more than {p} observations, got {T}")
    target = Y[:, p:]
    regressors = np.vstack([Y[:, p - j : T - j] for j in range(1, p + 1)])
    B, *_ = linalg.lstsq(regressors.T, target.T)
    B = B.T
    coefs = [B[:, j * k : (j + 1) * k] for j in range(p)]
    residuals = target - B @ regressors
    sigma = symmetrize(residuals @ residuals.T / residuals.shape[1])
    return VarFit(coefs=coefs, residuals=residuals, sigma=sigma)


def right_solve(B: np.ndarray, S: np.ndarray, cond_limit: float) -> tuple[np.ndarray, float]:
    """
    Solve ``X S = B`` for a symmetric positive semidefinite ``S``.

    When ``S`` is ill-conditioned a ridge ``δ·I`` is added first, with δ a
    small multiple of the average diagonal.

    :return: ``(X, δ)``; δ is 0 when no ridge was needed
    """
    S = symmetrize(np.asarray(S, dtype=float))
    k = S.shape[0]
    ridge = 0.0
    cond = np.linalg.cond(S) if k else 1.0
    if not np.isfinite(cond) or cond > cond_limit:
        scale = float(np.trace(S)) / k if k else 0.0
        ridge = 1e-8 * (scale if scale > 0 else 1.0)
        S = S + ridge * np.eye(k)
    X = linalg.solve(S, np.asarray(B, dtype=float).T, assume_a="sym").T
    return X, ridge
