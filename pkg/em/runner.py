"""
EM iterations with the symmetric relative-likelihood stopping rule.
"""

from __future__ import annotations

import numpy as np

from em.initialization import init_pca
from em.steps import blend_params, m_step, run_e_step
from em.types import EMState, EStepOutput, TieGroups
from utils.constants import EM_MAX_HALVINGS
from utils.exceptions import LikelihoodDecreaseError
from utils.logging_interfaces import LoggerProtocol
from utils.model import FactorEstimates, ModelSpec, Params


def relative_change(current: float, previous: float) -> float:
    """``|ℓ_k - ℓ_{k-1}| / (|ℓ_k| + |ℓ_{k-1}|)``; 0 when both are 0."""
    denom = abs(current) + abs(previous)
    return abs(current - previous) / denom if denom > 0 else 0.0


def common_components(Lambda: np.ndarray, F: np.ndarray) -> np.ndarray:
    """
    ``Λ F`` computed once per distinct loading row.

    Series sharing a loading row get bitwise identical common components.

    :param F: r×T factors
    """
    unique_rows, inverse = np.unique(Lambda, axis=0, return_inverse=True)
    return (unique_rows @ F)[np.ravel(inverse)]


def factor_estimates(X: np.ndarray, params: Params, out: EStepOutput) -> FactorEstimates:
    """Package the smoother pass at the final parameters."""
    smoothed = out.smoothed
    chi = common_components(params.Lambda, smoothed.means[:, : params.r].T)
    return FactorEstimates(
        F_smoothed=smoothed.means,
        P_smoothed=smoothed.covs,
        P_lag1=smoothed.lag1,
        chi=chi,
        xi=X - chi,
        loglik=out.loglik,
        r=params.r,
    )


def tie_initial_rows(params: Params, constraints: TieGroups | None) -> Params:
    """Average the starting loading rows within each tie group."""
    if not constraints:
        return params
    Lambda = params.Lambda.copy()
    for members in constraints.values():
        rows = list(members)
        if len(rows) > 1:
            Lambda[rows] = Lambda[rows].mean(axis=0)
    return params.with_updates(Lambda=Lambda)


def step_with_halving(
    params: Params,
    candidate: Params,
    X: np.ndarray,
    spec: ModelSpec,
    previous: float,
    k: int,
    *,
    max_halvings: int = EM_MAX_HALVINGS,
    variant: str = "dk_no_inverse",
    logger: LoggerProtocol | None = None,
) -> tuple[Params, EStepOutput]:
    """
    Accept the M-step update, or the nearest blend of it that keeps ℓ.

    The full update is tried first. When it lowers ℓ by more than
    ``loglik_slack·|ℓ|`` the step is halved towards ``params`` until ℓ holds.

    :param previous: ℓ at ``params``
    :param k: Iteration number, for messages
    :raises LikelihoodDecreaseError: If every halved step still lowers ℓ
    """
    if logger is None:
        from utils.logger import log as logger

    floor = previous - spec.loglik_slack * abs(previous)
    alpha = 1.0
    current = previous
    for _ in range(max_halvings + 1):
        trial = blend_params(params, candidate, alpha)
        out = run_e_step(trial, X, spec, variant=variant, logger=logger)
        current = out.loglik
        if current >= floor:
            if alpha < 1.0:
                logger.warning(
                    f"EM iteration {k}: full update lowered the likelihood; "
                    f"step shortened to {alpha:.3g}"
                )
            return trial, out
        alpha *= 0.5
    raise LikelihoodDecreaseError(k, previous, current)


def run_em(
    X: np.ndarray,
    spec: ModelSpec,
    constraints: TieGroups | None = None,
    *,
    rho: np.ndarray | None = None,
    init_params: Params | None = None,
    variant: str = "dk_no_inverse",
    logger: LoggerProtocol | None = None,
) -> tuple[EMState, FactorEstimates]:
    """
    Quasi-maximum-likelihood estimation of Θ by EM.

    Iterates until ``Δℓ < em_tol`` after at least ``em_min_iter`` updates, or
    until ``em_max_iter`` updates have been made. The smoother pass at the
    final parameters is returned as :class:`FactorEstimates`.

    :param X: n×T preprocessed panel
    :param spec: Dimensions and algorithm settings
    :param constraints: Tie groups ``{name: [row indices]}``
    :param rho: Frozen I(1) flags for the idiosyncratic components
    :param init_params: Starting values; principal components when omitted
    :param variant: Smoother variant used by the E-step
    :raises LikelihoodDecreaseError: If ℓ drops by more than ``loglik_slack·|ℓ|`` even after
        the update has been halved ``EM_MAX_HALVINGS`` times
    """
    if logger is None:
        from utils.logger import log as logger

    X = np.asarray(X, dtype=float)
    params = init_params if init_params is not None else init_pca(X, spec, rho)
    params = tie_initial_rows(params, constraints)

    warnings: list[str] = []
    out = run_e_step(params, X, spec, variant=variant, logger=logger)
    warnings.extend(out.smoothed.warnings)
    path = [out.loglik]
    logger.debug(f"EM start: loglik={out.loglik:.6f}")

    converged = False
    delta = np.inf
    k = 0
    while k < spec.em_max_iter:
        k += 1
        candidate = m_step(out.stats, constraints, warnings=warnings, logger=logger)
        new_params, new_out = step_with_halving(
            params, candidate, X, spec, path[-1], k, variant=variant, logger=logger
        )
        warnings.extend(new_out.smoothed.warnings)

        current = new_out.loglik
        delta = relative_change(current, path[-1])
        params, out = new_params, new_out
        path.append(current)
        logger.debug(f"EM iteration {k}: loglik={current:.6f} delta={delta:.3e}")

        if k >= spec.em_min_iter and delta < spec.em_tol:
            converged = True
            break

    if converged:
        logger.info(f"EM converged after {k} iterations (loglik={path[-1]:.4f})")
    else:
        logger.warning(f"EM stopped at the iteration budget ({k}) with delta={delta:.3e}")

    state = EMState(
        params=params,
        loglik_path=np.asarray(path),
        k=k,
        converged=converged,
        delta_l=float(delta),
        warnings=tuple(warnings),
    )
    return state, factor_estimates(X, params, out)
