"""
Brute-force joint-Gaussian conditioning, used to check the Kalman recursions.

The prior of (s_1, ..., s_T) and the observations (x_1, ..., x_T) is written
down as one dense Gaussian and conditioned with a Cholesky factorization.
Only meant for small systems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from kalman.state_space import diffuse_initial_state
from utils.constants import DIFFUSE_SCALE, ORACLE_MAX_DIM
from utils.exceptions import OracleError
from utils.linalg import symmetrize
from utils.model import InitialState, StateSpace

LOG_2PI = np.log(2.0 * np.pi)


@dataclass(frozen=True)
class OracleMoments:
    """
    Exact posterior moments of the states given a block of observations.

    :ivar means: T×m posterior means of s_1..s_T
    :ivar covs: T×m×m posterior covariances
    :ivar lag1: T×m×m posterior Cov(s_t, s_{t-1}); entry 0 is zero
    :ivar loglik: Log-density of the observations
    """

    means: np.ndarray
    covs: np.ndarray
    lag1: np.ndarray
    loglik: float


@dataclass(frozen=True)
class OracleFilterMoments:
    """Filter marginals obtained by conditioning on each data prefix."""

    pred_means: np.ndarray
    pred_covs: np.ndarray
    filt_means: np.ndarray
    filt_covs: np.ndarray


def _state_prior(ss: StateSpace, T: int, init: InitialState) -> tuple[np.ndarray, np.ndarray]:
    """Mean and covariance of the stacked states s_1..s_T."""
    m = ss.m
    Tm, Q = ss.Tmat, ss.Qmat
    marginal = [np.asarray(init.cov, dtype=float)]
    means = [np.asarray(init.mean, dtype=float)]
    for _ in range(T - 1):
        means.append(Tm @ means[-1])
        marginal.append(Tm @ marginal[-1] @ Tm.T + Q)

    S = np.zeros((T * m, T * m))
    for u in range(T):
        block = marginal[u]
        for t in range(u, T):
            S[t * m : (t + 1) * m, u * m : (u + 1) * m] = block
            S[u * m : (u + 1) * m, t * m : (t + 1) * m] = block.T
            block = Tm @ block
    return np.concatenate(means), symmetrize(S)


def _condition(
    mu_s: np.ndarray, S: np.ndarray, ss: StateSpace, X: np.ndarray
) -> tuple[np.ndarray, np.ndarray, float]:
    """Condition the stacked states on the first ``X.shape[1]`` observations."""
    m, n = ss.m, ss.n
    k = X.shape[1]
    if k == 0:
        return mu_s, S, 0.0
    Zbig = np.zeros((k * n, S.shape[0]))
    for t in range(k):
        Zbig[t * n : (t + 1) * n, t * m : (t + 1) * m] = ss.Zmat
    S_xs = Zbig @ S
    S_xx = symmetrize(S_xs @ Zbig.T + np.diag(np.tile(ss.Hobs, k)))
    try:
        chol = linalg.cho_factor(S_xx, lower=True)
    except linalg.LinAlgError as exc:
        raise OracleError("joint observation covariance is not positive definite") from exc

    resid = X.T.reshape(-1) - Zbig @ mu_s
    alpha = linalg.cho_solve(chol, resid)
    post_mean = mu_s + S_xs.T @ alpha
    post_cov = symmetrize(S - S_xs.T @ linalg.cho_solve(chol, S_xs))
    logdet = 2.0 * float(np.sum(np.log(np.diag(chol[0]))))
    loglik = -0.5 * (k * n * LOG_2PI + logdet + float(resid @ alpha))
    return post_mean, post_cov, loglik


def _prepare(
    ss: StateSpace, X: np.ndarray, init: InitialState | None, diffuse_scale: float
) -> tuple[np.ndarray, InitialState]:
    X = np.asarray(X, dtype=float)
    T = X.shape[1]
    if T * ss.m > ORACLE_MAX_DIM:
        raise OracleError(f"T*m = {T * ss.m} exceeds the dense limit {ORACLE_MAX_DIM}")
    if init is None:
        init = diffuse_initial_state(ss, diffuse_scale)
    return X, init


def oracle_conditional_moments(
    ss: StateSpace,
    X: np.ndarray,
    init: InitialState | None = None,
    *,
    diffuse_scale: float = DIFFUSE_SCALE,
) -> OracleMoments:
    """
    Exact smoothed moments and log-density by dense conditioning.

    :raises OracleError: If T·m exceeds the dense limit or the joint covariance is not PD
    """
    X, init = _prepare(ss, X, init, diffuse_scale)
    T, m = X.shape[1], ss.m
    mu_s, S = _state_prior(ss, T, init)
    mean, cov, loglik = _condition(mu_s, S, ss, X)

    means = mean.reshape(T, m)
    covs = np.empty((T, m, m))
    lag1 = np.zeros((T, m, m))
    for t in range(T):
        covs[t] = cov[t * m : (t + 1) * m, t * m : (t + 1) * m]
        if t > 0:
            lag1[t] = cov[t * m : (t + 1) * m, (t - 1) * m : t * m]

    return OracleMoments(means=means, covs=covs, lag1=lag1, loglik=loglik)


def oracle_filtered_moments(
    ss: StateSpace,
    X: np.ndarray,
    init: InitialState | None = None,
    *,
    diffuse_scale: float = DIFFUSE_SCALE,
) -> OracleFilterMoments:
    """
    Predicted and filtered marginals: s_t given x_1..x_{t-1} and given x_1..x_t.

    :raises OracleError: Same conditions as :func:`oracle_conditional_moments`
    """
    X, init = _prepare(ss, X, init, diffuse_scale)
    T, m = X.shape[1], ss.m
    mu_s, S = _state_prior(ss, T, init)

    pred_means = np.empty((T, m))
    pred_covs = np.empty((T, m, m))
    filt_means = np.empty((T, m))
    filt_covs = np.empty((T, m, m))
    for t in range(T):
        block = slice(t * m, (t + 1) * m)
        mean, cov, _ = _condition(mu_s, S, ss, X[:, :t])
        pred_means[t], pred_covs[t] = mean[block], cov[block, block]
        mean, cov, _ = _condition(mu_s, S, ss, X[:, : t + 1])
        filt_means[t], filt_covs[t] = mean[block], cov[block, block]

    return OracleFilterMoments(
        pred_means=pred_means, pred_covs=pred_covs, filt_means=filt_means, filt_covs=filt_covs
    )
