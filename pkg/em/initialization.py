"""
Principal-component starting values for EM.

Loadings are the leading eigenvectors of the covariance of Δx scaled by √n,
factors are the integrated principal components of Δx with F̃_1 = 0, and the
VAR, shock loading and measurement variances are fitted on those factors.
"""

from __future__ import annotations

import numpy as np

from utils.exceptions import InvalidSpecError, PreprocessError
from utils.linalg import fit_var, fix_first_row_positive, leading_eigh, symmetrize
from utils.model import ModelSpec, Params


def observation_floors(X: np.ndarray, frac: float) -> np.ndarray:
    """``frac · var(Δx_i)`` per series, ``frac`` itself for a series with constant differences."""
    dvar = np.var(np.diff(X, axis=1), axis=1)
    return np.where(dvar > 0, frac * dvar, frac)


def shock_loading(sigma: np.ndarray, q: int) -> np.ndarray:
    """
    H with q columns such that HH' is the best rank-q approximation of ``sigma``.

    Eigenvalues are clipped at a tiny positive value so H keeps full column rank.
    """
    vals, vecs = leading_eigh(sigma, q)
    scale = max(float(np.trace(sigma)), 1.0)
    vals = np.maximum(vals, 1e-12 * scale)
    return fix_first_row_positive(vecs) * np.sqrt(vals)


def pca_factors(X: np.ndarray, r: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Loadings ``√n V`` and integrated principal components of Δx.

    :return: (Λ as n×r, F̃ as r×T with F̃_1 = 0)
    """
    n, T = X.shape
    dX = np.diff(X, axis=1)
    cov = np.atleast_2d(symmetrize(np.atleast_2d(np.cov(dX))))
    _, V = leading_eigh(cov, r)
    Lambda = np.sqrt(n) * fix_first_row_positive(V)
    F = np.zeros((r, T))
    F[:, 1:] = np.cumsum(Lambda.T @ dX / n, axis=1)
    return Lambda, F


def init_pca(X: np.ndarray, spec: ModelSpec, rho: np.ndarray | None = None) -> Params:
    """
    Starting parameters Θ_0.

    :param X: n×T preprocessed panel
    :param spec: Model dimensions
    :param rho: Frozen I(1) flags; all zero when omitted
    :raises PreprocessError: If the panel holds non-finite values
    :raises InvalidSpecError: If T is too short for a VAR(2) on r factors
    """
    X = np.asarray(X, dtype=float)
    n, T = X.shape
    r, q = spec.r, spec.q
    bad = np.flatnonzero(~np.all(np.isfinite(X), axis=0))
    if bad.size:
        raise PreprocessError("panel contains non-finite values", index=int(bad[0]))
    if T <= r + spec.var_order:
        raise InvalidSpecError(
            f"T={T} must exceed r + var_order = {r + spec.var_order}", field="T"
        )
    rho = np.zeros(n, dtype=int) if rho is None else np.asarray(rho, dtype=int)

    Lambda, F = pca_factors(X, r)

    var_fit = fit_var(F, spec.var_order)
    A1, A2 = var_fit.coefs
    H = shock_loading(var_fit.sigma, q)

    floor = observation_floors(X, spec.i1_floor_frac)
    resid = X - Lambda @ F
    resid_var = np.where(rho == 1, np.var(np.diff(resid, axis=1), axis=1), np.var(resid, axis=1))
    R = np.maximum(resid_var, floor)

    return Params(
        Lambda=Lambda, A1=A1, A2=A2, H=H, R=R, rho=rho.copy(), floor=floor
    )
