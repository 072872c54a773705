"""
Forward Kalman filter with a diagonal observation covariance.

Each step works with m×m matrices only. With D = diag(Hobs), M = Z'D⁻¹Z and
G_t = I + M P_{t|t-1}::

    Z'F_t⁻¹v_t    = G_t⁻¹ Z'D⁻¹v_t
    Z'F_t⁻¹Z      = G_t⁻¹ M
    log det F_t   = Σ log h_i + log det G_t
    P_{t|t}       = P_{t|t-1} G_t⁻¹

so the cost per step is O(n m² + m³).
"""

from __future__ import annotations

import numpy as np
from scipy import linalg

from kalman.state_space import diffuse_initial_state
from kalman.types import FilterOutput
from utils.constants import DIFFUSE_SCALE
from utils.exceptions import DimensionMismatchError, FilterError
from utils.linalg import symmetrize
from utils.model import InitialState, StateSpace

LOG_2PI = np.log(2.0 * np.pi)


def kf_forward(
    ss: StateSpace,
    X: np.ndarray,
    init: InitialState | None = None,
    *,
    diffuse_scale: float = DIFFUSE_SCALE,
) -> FilterOutput:
    """
    Run the filter over an n×T panel.

    :param ss: State space
    :param X: n×T observations
    :param init: Prior of the first state s_1 before x_1 is seen; κ·I when omitted
    :param diffuse_scale: κ used when ``init`` is omitted
    :raises FilterError: On non-finite data, nonpositive observation variances
        or a breakdown of the innovation covariance at some t
    """
    X = np.asarray(X, dtype=float)
    n, m = ss.n, ss.m
    if X.ndim != 2 or X.shape[0] != n:
        raise DimensionMismatchError("X", (n, X.shape[-1] if X.ndim else 0), X.shape)
    T = X.shape[1]
    h = np.asarray(ss.Hobs, dtype=float)
    if not np.all(h > 0):
        raise FilterError(0, "observation variances must be strictly positive")

    if init is None:
        init = diffuse_initial_state(ss, diffuse_scale)

    Tm, Z, Q = ss.Tmat, ss.Zmat, ss.Qmat
    Zt_Dinv = Z.T / h
    M = symmetrize(Zt_Dinv @ Z)
    sum_log_h = float(np.sum(np.log(h)))
    eye = np.eye(m)

    F_pred = np.empty((T, m))
    P_pred = np.empty((T, m, m))
    F_filt = np.empty((T, m))
    P_filt = np.empty((T, m, m))
    innovations = np.empty((T, n))
    scaled = np.empty((T, m))
    precisions = np.empty((T, m, m))

    a = np.asarray(init.mean, dtype=float).copy()
    P = symmetrize(np.asarray(init.cov, dtype=float))
    loglik = 0.0

    for t in range(T):
        x_t = X[:, t]
        if not np.all(np.isfinite(x_t)):
            raise FilterError(t, "observation vector is not finite")
        F_pred[t] = a
        P_pred[t] = P

        v = x_t - Z @ a
        b = Zt_Dinv @ v
        G = eye + M @ P
        sign, logdet_G = np.linalg.slogdet(G)
        if not (sign > 0 and np.isfinite(logdet_G)):
            raise FilterError(t)
        lu = linalg.lu_factor(G, check_finite=False)
        u = linalg.lu_solve(lu, b, check_finite=False)
        N = symmetrize(linalg.lu_solve(lu, M, check_finite=False))

        quad = float(v @ (v / h) - b @ (P @ u))
        logdet_F = sum_log_h + logdet_G
        if not np.isfinite(quad):
            raise FilterError(t)
        loglik -= 0.5 * (n * LOG_2PI + logdet_F + quad)

        a_f = a + P @ u
        P_f = symmetrize(linalg.lu_solve(lu, P, trans=1, check_finite=False).T)

        innovations[t] = v
        scaled[t] = u
        precisions[t] = N
        F_filt[t] = a_f
        P_filt[t] = P_f

        a = Tm @ a_f
        P = symmetrize(Tm @ P_f @ Tm.T + Q)

    return FilterOutput(
        F_pred=F_pred,
        P_pred=P_pred,
        F_filt=F_filt,
        P_filt=P_filt,
        innovations=innovations,
        scaled_innovations=scaled,
        innovation_precisions=precisions,
        loglik=float(loglik),
        init=init,
    )
