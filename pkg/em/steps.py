"""
E-step and M-step of the factor-model EM algorithm.

The E-step runs the filter and the inversion-free smoother under the current
parameters and aggregates the smoothed moments. The M-step maximizes the
expected complete-data log-likelihood given those moments; the prior of the
first state is fixed, so only the in-sample transitions enter the VAR and
random-walk updates.
"""

from __future__ import annotations

import numpy as np

from em.initialization import shock_loading
from em.types import EStepOutput, SufficientStats, TieGroups
from kalman import build_state_space, kf_forward, ks_backward
from utils.constants import PINV_COND_LIMIT
from utils.exceptions import InvalidSpecError
from utils.linalg import right_solve, symmetrize
from utils.logging_interfaces import LoggerProtocol
from utils.model import InitialState, ModelSpec, Params


def _default_spec(params: Params, X: np.ndarray) -> ModelSpec:
    return ModelSpec(n=params.n, T=X.shape[1], r=params.r, q=params.q)


def collect_stats(
    X: np.ndarray, params: Params, means: np.ndarray, covs: np.ndarray, lag1: np.ndarray
) -> SufficientStats:
    """
    Aggregate smoothed state moments into :class:`SufficientStats`.

    :param means: T×m smoothed means
    :param covs: T×m×m smoothed covariances
    :param lag1: T×m×m Cov(s_t, s_{t-1} | X); entry 0 is unused
    """
    r = params.r
    T = means.shape[0]
    F = means[:, :r]
    Z = means[:, : 2 * r]

    Sxf = X @ F
    Sff = symmetrize(F.T @ F + covs[:, :r, :r].sum(axis=0))
    Sxx = np.einsum("it,it->i", X, X)

    # lag1 covers the whole z_{t-1} block; its F_{t-1} part equals the companion block of covs[t]
    S_lag = F[1:].T @ Z[:-1] + lag1[1:, :r, : 2 * r].sum(axis=0)
    Szz = symmetrize(Z[:-1].T @ Z[:-1] + covs[:-1, : 2 * r, : 2 * r].sum(axis=0))
    Sff_next = symmetrize(F[1:].T @ F[1:] + covs[1:, :r, :r].sum(axis=0))

    i1 = params.i1_index
    pos = 2 * r + np.arange(i1.size)
    xi = means[:, pos]
    var_xi = covs[:, pos, pos]
    Sxi_f = xi.T @ F + np.einsum("tjk->jk", covs[:, pos, :r])
    cross = xi[1:] * xi[:-1] + lag1[1:, pos, pos]
    Sdxi = np.sum(
        xi[1:] ** 2 + var_xi[1:] + xi[:-1] ** 2 + var_xi[:-1] - 2.0 * cross, axis=0
    )

    return SufficientStats(
        Sxf=Sxf,
        Sff=Sff,
        Sxx=Sxx,
        S_lag=S_lag,
        Szz=Szz,
        Sff_next=Sff_next,
        Sxi_f=Sxi_f,
        Sdxi=Sdxi,
        T=T,
        params=params,
    )


def run_e_step(
    params: Params,
    X: np.ndarray,
    spec: ModelSpec | None = None,
    *,
    init: InitialState | None = None,
    variant: str = "dk_no_inverse",
    logger: LoggerProtocol | None = None,
) -> EStepOutput:
    """Filter, smooth and aggregate; keeps every intermediate result."""
    X = np.asarray(X, dtype=float)
    spec = spec or _default_spec(params, X)
    ss = build_state_space(params, spec)
    filtered = kf_forward(ss, X, init, diffuse_scale=spec.diffuse_scale)
    smoothed = ks_backward(filtered, ss, variant, logger=logger)
    stats = collect_stats(X, params, smoothed.means, smoothed.covs, smoothed.lag1)
    return EStepOutput(
        stats=stats, loglik=filtered.loglik, ss=ss, filtered=filtered, smoothed=smoothed
    )


def e_step(
    params: Params, X: np.ndarray, spec: ModelSpec | None = None, **kwargs
) -> tuple[SufficientStats, float]:
    """
    Expected sufficient statistics and log-likelihood under ``params``.

    :return: (stats, loglik), loglik being the prediction-error value of the filter
    :raises FilterError: Propagated from the filter
    """
    out = run_e_step(params, X, spec, **kwargs)
    return out.stats, out.loglik


def _tie_rows(
    Lambda: np.ndarray, groups: TieGroups, weights: np.ndarray, n: int
) -> np.ndarray:
    Lambda = Lambda.copy()
    for name, members in groups.items():
        rows = np.asarray(list(members), dtype=int)
        if rows.size < 2:
            continue
        if np.any((rows < 0) | (rows >= n)):
            raise InvalidSpecError(
                f"tie group {name!r} references a row outside 0..{n - 1}", field="constraints"
            )
        w = weights[rows]
        shared = (w @ Lambda[rows]) / w.sum()
        Lambda[rows] = shared
    return Lambda


def m_step(
    stats: SufficientStats,
    constraints: TieGroups | None = None,
    *,
    cond_limit: float = PINV_COND_LIMIT,
    warnings: list[str] | None = None,
    logger: LoggerProtocol | None = None,
) -> Params:
    """
    Closed-form parameter update.

    Within a tie group the shared loading row is the pooled least-squares
    solution weighted by the inverse observation variances of the E-step
    parameters, i.e. the weighted average of the members' unconstrained rows.

    :param stats: Output of :func:`e_step`
    :param constraints: Tie groups as ``{name: [row indices]}``
    :param cond_limit: Condition number above which a ridge is added to a normal matrix
    :param warnings: Ridge fallbacks are appended here when given
    """
    if logger is None:
        from utils.logger import log as logger

    prev = stats.params
    n, r, q = prev.n, prev.r, prev.q
    T, T_tr = stats.T, stats.transitions
    i1 = prev.i1_index

    def _solve(B: np.ndarray, S: np.ndarray, name: str) -> np.ndarray:
        solution, ridge = right_solve(B, S, cond_limit)
        if ridge > 0:
            message = f"{name} normal matrix ill-conditioned; ridge {ridge:.3e} added"
            logger.warning(message)
            if warnings is not None:
                warnings.append(message)
        return solution

    cross = stats.Sxf.copy()
    cross[i1] -= stats.Sxi_f
    Lambda = _solve(cross, stats.Sff, "loadings")
    if constraints:
        obs_var = np.where(prev.rho == 1, prev.floor, prev.R)
        Lambda = _tie_rows(Lambda, constraints, 1.0 / obs_var, n)

    A = _solve(stats.S_lag, stats.Szz, "VAR")
    A1, A2 = A[:, :r], A[:, r:]
    sigma = symmetrize((stats.Sff_next - A @ stats.S_lag.T) / T_tr)
    H = shock_loading(sigma, q)

    # expected squared residual of x_it - λ_i'F_t for every series
    fit = np.einsum("ir,ir->i", Lambda, stats.Sxf)
    quad = np.einsum("ir,rs,is->i", Lambda, stats.Sff, Lambda)
    resid = (stats.Sxx - 2.0 * fit + quad) / T
    R = np.maximum(resid, prev.floor)
    if i1.size:
        R[i1] = np.maximum(stats.Sdxi / T_tr, prev.floor[i1])

    return prev.with_updates(Lambda=Lambda, A1=A1, A2=A2, H=H, R=R)


def blend_params(previous: Params, candidate: Params, alpha: float) -> Params:
    """
    Parameters a fraction ``alpha`` of the way from ``previous`` to ``candidate``.

    Loadings, VAR matrices and observation variances move linearly, so tied
    rows stay tied and R stays above its floor. The shock loading is the
    rank-q factor of the blended shock covariance. ``alpha=1`` returns
    ``candidate`` unchanged.
    """
    if alpha >= 1.0:
        return candidate
    if alpha <= 0.0:
        raise InvalidSpecError(f"blend weight {alpha} must lie in (0, 1]", field="alpha")

    def mix(old: np.ndarray, new: np.ndarray) -> np.ndarray:
        return (1.0 - alpha) * old + alpha * new

    sigma = symmetrize(mix(previous.shock_cov, candidate.shock_cov))
    return candidate.with_updates(
        Lambda=mix(previous.Lambda, candidate.Lambda),
        A1=mix(previous.A1, candidate.A1),
        A2=mix(previous.A2, candidate.A2),
        H=shock_loading(sigma, candidate.q),
        R=mix(previous.R, candidate.R),
    )
