"""
Steady state of the prediction-covariance (Riccati) recursion and the
burn-in index of a filter run.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg

from kalman.state_space import diffuse_initial_state
from kalman.types import RiccatiResult
from utils.constants import BURN_IN_TOL, DIFFUSE_SCALE, RICCATI_MAX_ITER, RICCATI_TOL
from utils.exceptions import ConvergenceError
from utils.linalg import symmetrize
from utils.model import StateSpace


def riccati_step(ss: StateSpace, P: np.ndarray, M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    One step ``P_{t|t-1} -> (P_{t|t}, P_{t+1|t})`` with M = Z'D⁻¹Z.
    """
    G = np.eye(ss.m) + M @ P
    P_filt = symmetrize(linalg.solve(G.T, P).T)
    P_next = symmetrize(ss.Tmat @ P_filt @ ss.Tmat.T + ss.Qmat)
    return P_filt, P_next


def riccati_steady_state(
    ss: StateSpace,
    tol: float = RICCATI_TOL,
    max_iter: int = RICCATI_MAX_ITER,
    *,
    P0: np.ndarray | None = None,
    diffuse_scale: float = DIFFUSE_SCALE,
) -> RiccatiResult:
    """
    Iterate the Riccati recursion until ``‖P_{k+1} - P_k‖_F < tol``.

    Starts from the first predicted covariance of a filter run, which is
    ``P0`` itself (the diffuse prior when omitted).

    :raises ConvergenceError: If ``max_iter`` steps do not reach ``tol``
    """
    if P0 is None:
        P0 = diffuse_initial_state(ss, diffuse_scale).cov
    M = symmetrize((ss.Zmat.T / ss.Hobs) @ ss.Zmat)
    block = slice(0, ss.r)

    P = symmetrize(np.asarray(P0, dtype=float))
    traces = [float(np.trace(P[block, block]))]
    residual = np.inf
    for k in range(1, max_iter + 1):
        P_filt, P_next = riccati_step(ss, P, M)
        residual = float(np.linalg.norm(P_next - P))
        P = P_next
        traces.append(float(np.trace(P[block, block])))
        if residual < tol:
            # filtered covariance consistent with the returned fixed point
            P_filt, _ = riccati_step(ss, P, M)
            return RiccatiResult(
                P_pred=P,
                P_filt=P_filt,
                iterations=k,
                residual=residual,
                trace_path=np.asarray(traces),
            )
    raise ConvergenceError(
        "Riccati recursion did not converge", residual=residual, iterations=max_iter
    )


def burn_in_index(P_pred: np.ndarray, P_star: np.ndarray, tol: float = BURN_IN_TOL) -> int | None:
    """
    First t with ``‖P_{t|t-1} - P*‖ / ‖P*‖ < tol``; ``None`` if never reached.

    When ‖P*‖ = 0 the absolute distance is used.
    """
    scale = float(np.linalg.norm(P_star))
    if scale == 0.0:
        scale = 1.0
    distances = np.linalg.norm(P_pred - P_star, axis=(1, 2)) / scale
    hits = np.flatnonzero(distances < tol)
    return int(hits[0]) if hits.size else None
