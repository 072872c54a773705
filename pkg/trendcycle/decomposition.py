"""
Non-parametric trend-cycle decomposition of the estimated static factors.

Trend directions Φ₁ are the leading eigenvectors of the long-run covariance
``T⁻²ΣF̂F̂'``; the complement Φ₀ spans the cointegration space, where a
VAR(2) is fitted and the cycle directions 𝓗 are the leading eigenvectors of
its residual covariance.
"""

from __future__ import annotations

import numpy as np

from preprocess.detrend import DetrendResult
from trendcycle.types import CycleFit, TCDecomposition, TrendFit, VariableComponents
from utils.constants import EIGENGAP_TOL, VAR_ORDER
from utils.exceptions import InvalidSpecError
from utils.linalg import fit_var, fix_signs, leading_eigh, orthogonal_complement, symmetrize
from utils.logging_interfaces import LoggerProtocol


def _logger(logger: LoggerProtocol | None) -> LoggerProtocol:
    if logger is None:
        from utils.logger import log

        return log
    return logger


def longrun_cov(F_hat: np.ndarray) -> np.ndarray:
    """``S = T⁻² Σ_t F̂_t F̂_t'`` for an r×T factor matrix."""
    F = np.atleast_2d(np.asarray(F_hat, dtype=float))
    T = F.shape[1]
    return symmetrize(F @ F.T / T**2)


def extract_trends(
    F_hat: np.ndarray, q_minus_d: int, *, logger: LoggerProtocol | None = None
) -> TrendFit:
    """
    Leading ``q - d`` principal components of the long-run covariance.

    Eigenvector signs put the largest-magnitude entry positive.

    :raises InvalidSpecError: Unless ``1 <= q - d < r``
    """
    log = _logger(logger)
    F = np.atleast_2d(np.asarray(F_hat, dtype=float))
    r = F.shape[0]
    if not 1 <= q_minus_d < r:
        raise InvalidSpecError(f"trend count {q_minus_d} must satisfy 1 <= q-d < r={r}", field="d")

    S = longrun_cov(F)
    vals, vecs = leading_eigh(S, r)
    Phi1 = fix_signs(vecs[:, :q_minus_d])

    warnings: list[str] = []
    gap = vals[q_minus_d - 1] - vals[q_minus_d]
    if gap < EIGENGAP_TOL * max(abs(float(vals[0])), 1.0):
        message = (
            f"eigengap {gap:.3e} between components {q_minus_d} and {q_minus_d + 1}; "
            "trend directions are not identified"
        )
        log.warning(message)
        warnings.append(message)

    return TrendFit(Phi1=Phi1, trends=Phi1.T @ F, eigenvalues=vals, warnings=tuple(warnings))


def extract_cycles(
    F_hat: np.ndarray,
    Phi1: np.ndarray,
    Phi0: np.ndarray,
    d: int,
    *,
    var_order: int = VAR_ORDER,
    logger: LoggerProtocol | None = None,
) -> CycleFit:
    """
    Common cycles from a VAR fitted on the projection ``G_t = Φ₀'F̂_t``.

    An unstable VAR fit is reported but does not stop the decomposition.

    :param Phi1: Trend directions; used to check that Phi0 is its complement
    :param d: Number of common cycles
    :raises InvalidSpecError: If d exceeds the dimension of the complement
    """
    log = _logger(logger)
    F = np.atleast_2d(np.asarray(F_hat, dtype=float))
    k = Phi0.shape[1]
    if not 1 <= d <= k:
        raise InvalidSpecError(f"d={d} must lie in 1..{k}", field="d")
    if Phi1.shape[0] != Phi0.shape[0] or Phi1.shape[1] + k != F.shape[0]:
        raise InvalidSpecError("Phi0 is not the orthogonal complement of Phi1", field="Phi0")

    G = Phi0.T @ F
    var_fit = fit_var(G, var_order)
    warnings: list[str] = []
    if not var_fit.is_stable:
        message = (
            f"VAR({var_order}) on the cointegration-space projection is not stable "
            f"(spectral radius {var_fit.spectral_radius:.4f})"
        )
        log.warning(message)
        warnings.append(message)

    _, vecs = leading_eigh(var_fit.sigma, d)
    Hmat = fix_signs(vecs)
    cycles = Hmat.T @ G
    return CycleFit(
        G=G,
        Hmat=Hmat,
        cycles=cycles,
        residual_cycles=G - Hmat @ cycles,
        var_fit=var_fit,
        warnings=tuple(warnings),
    )


def decompose_factors(
    F_hat: np.ndarray,
    q: int,
    d: int,
    *,
    var_order: int = VAR_ORDER,
    logger: LoggerProtocol | None = None,
) -> TCDecomposition:
    """
    Full decomposition of the r×T factors into trends, cycles and residual cycles.

    :param q: Number of dynamic shocks
    :param d: Cointegration deficit; ``q - d`` trends and ``d`` cycles
    """
    F = np.atleast_2d(np.asarray(F_hat, dtype=float))
    trend_fit = extract_trends(F, q - d, logger=logger)
    Phi0 = fix_signs(orthogonal_complement(trend_fit.Phi1))
    cycle_fit = extract_cycles(F, trend_fit.Phi1, Phi0, d, var_order=var_order, logger=logger)
    return TCDecomposition(
        Phi1=trend_fit.Phi1,
        Phi0=Phi0,
        trends=trend_fit.trends,
        G=cycle_fit.G,
        Hmat=cycle_fit.Hmat,
        cycles=cycle_fit.cycles,
        residual_cycles=cycle_fit.residual_cycles,
        var_fit=cycle_fit.var_fit,
        eigenvalues=trend_fit.eigenvalues,
        warnings=trend_fit.warnings + cycle_fit.warnings,
    )


def decompose_variable(
    series_id: str,
    loadings_row: np.ndarray,
    tc: TCDecomposition,
    detrend: DetrendResult | None,
    idiosyncratic: np.ndarray,
) -> VariableComponents:
    """
    Split one series into deterministic, trend, cycle, residual-cycle and idiosyncratic parts.

    :param series_id: Identifier carried onto the result
    :param loadings_row: λ_i, length r
    :param tc: Decomposition of the factors
    :param detrend: Deterministic component of the series; none when omitted
    :param idiosyncratic: ξ̂_i, length T
    """
    lam = np.asarray(loadings_row, dtype=float)
    T = tc.trends.shape[1]
    deterministic = detrend.deterministic(T) if detrend is not None else np.zeros(T)
    return VariableComponents(
        series_id=series_id,
        deterministic=deterministic,
        trend=lam @ tc.trend_part,
        cycle=lam @ tc.cycle_part,
        residual_cycle=lam @ tc.residual_part,
        idiosyncratic=np.asarray(idiosyncratic, dtype=float).copy(),
    )


def decompose_panel(
    ids: tuple[str, ...] | list[str],
    Lambda: np.ndarray,
    tc: TCDecomposition,
    detrend: tuple[DetrendResult, ...] | None,
    xi: np.ndarray,
) -> list[VariableComponents]:
    """:func:`decompose_variable` for every series of the panel."""
    return [
        decompose_variable(
            series_id,
            Lambda[i],
            tc,
            detrend[i] if detrend is not None else None,
            xi[i],
        )
        for i, series_id in enumerate(ids)
    ]


def sample_orthogonality(tc: TCDecomposition) -> np.ndarray:
    """Sample correlations between every trend and every cycle, (q-d)×d."""
    trends = tc.trends - tc.trends.mean(axis=1, keepdims=True)
    cycles = tc.cycles - tc.cycles.mean(axis=1, keepdims=True)
    norms = np.outer(np.linalg.norm(trends, axis=1), np.linalg.norm(cycles, axis=1))
    norms[norms == 0] = 1.0
    return trends @ cycles.T / norms
