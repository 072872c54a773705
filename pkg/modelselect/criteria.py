"""
Information criteria for the number of dynamic shocks and of common trends.

Both counts are estimated on a grid of penalty multipliers c and on nested
sub-panels. For small c every sub-panel selects the search ceiling; as c grows
the estimates pass through intervals where all sub-panels agree. The count is
read off the first such interval below the ceiling.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg

from modelselect.spectral import nested_fractions, nested_shape
from modelselect.types import QSelection, SpectralEstimate, StabilityScan, TrendSelection
from utils.constants import (
    PENALTY_C_MAX,
    PENALTY_C_MIN,
    PENALTY_C_STEPS,
    Q_SEARCH_MIN,
    SELECTION_SUBSAMPLES,
    TREND_KMAX,
)
from utils.exceptions import SelectionError
from utils.logging_interfaces import LoggerProtocol

_TINY = 1e-300


def _logger(logger: LoggerProtocol | None) -> LoggerProtocol:
    if logger is None:
        from utils.logger import log

        return log
    return logger


def default_c_grid() -> np.ndarray:
    return np.linspace(PENALTY_C_MIN, PENALTY_C_MAX, PENALTY_C_STEPS)


def spectral_penalty(n: int, T: int, bandwidth: int) -> float:
    """
    ``m^{-1/2} log m`` with ``m = min(n, M², √(T/M))``.

    m is bounded below by 2 so the penalty stays positive on very short samples.
    """
    M = max(bandwidth, 1)
    m = max(min(float(n), float(M) ** 2, np.sqrt(T / M)), 2.0)
    return float(np.log(m) / np.sqrt(m))


def _runs(stability: np.ndarray, path: np.ndarray) -> list[tuple[int, int]]:
    """Maximal index ranges ``[start, stop)`` with zero variance and a constant count."""
    runs: list[tuple[int, int]] = []
    start: int | None = None
    for i, value in enumerate(stability):
        stable = value <= 1e-12
        if stable and start is not None and path[i] != path[start]:
            runs.append((start, i))
            start = i
        elif stable and start is None:
            start = i
        elif not stable and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(stability)))
    return runs


def stability_scan(
    c_grid: np.ndarray, counts: np.ndarray, ceiling: int
) -> tuple[StabilityScan, str | None]:
    """
    Pick the penalty multiplier from a J×C table of estimates.

    The first stable interval is skipped when it sits at ``ceiling``. Without a
    stable interval below the ceiling the least variable c is used and a warning
    message is returned with the scan.
    """
    stability = counts.var(axis=0)
    path = counts[-1]
    candidates = [run for run in _runs(stability, path) if path[run[0]] != ceiling]
    if candidates:
        chosen, message = candidates[0][0], None
    else:
        below = np.flatnonzero(path != ceiling)
        pool = below if below.size else np.arange(stability.size)
        chosen = int(pool[np.argmin(stability[pool])])
        message = (
            "no stable penalty interval below the search ceiling; "
            f"using c={float(c_grid[chosen]):.3f} with variance {float(stability[chosen]):.3g}"
        )
    scan = StabilityScan(c_grid=c_grid, counts=counts, stability=stability, chosen=int(chosen))
    return scan, message


def _discarded_mass(est: SpectralEstimate, kmax: int) -> np.ndarray:
    """``log`` of the frequency-averaged discarded eigenvalue mass per series, k = 0..kmax."""
    avg = est.average_eigenvalues()[:kmax]
    kept = np.concatenate([[0.0], np.cumsum(avg)])
    V = (est.average_trace() - kept) / est.n
    return np.log(np.maximum(V, _TINY))


def select_q(
    spec_est: SpectralEstimate,
    q_max: int,
    *,
    c_grid: np.ndarray | None = None,
    logger: LoggerProtocol | None = None,
) -> QSelection:
    """
    Number of dynamic shocks from the spectral eigenvalues of Δx.

    For every sub-panel j and multiplier c::

        IC_j(k, c) = log(n_j⁻¹ Σ_{i>k} avg_ω μ_i(ω)) + k · c · p(n_j, T_j)

    is minimized over k = 0..kmax, where kmax is the larger of ``q_max`` and 10,
    capped by the available eigenvalues.

    :param spec_est: Output of :func:`modelselect.spectral.spectral_density_eigs`
    :param q_max: Upper bound on the returned count
    :param c_grid: Penalty multipliers; 300 points on [0.01, 3] by default
    :raises SelectionError: If ``q_max`` is not below n
    """
    log = _logger(logger)
    if q_max >= spec_est.n:
        raise SelectionError(f"q_max={q_max} must be below n={spec_est.n}", field="q_max")
    if q_max < 0:
        raise SelectionError("q_max must be nonnegative", field="q_max")
    c_grid = default_c_grid() if c_grid is None else np.asarray(c_grid, dtype=float)
    estimates = (*spec_est.subsamples, spec_est)
    kmax = min(
        min(e.k for e in estimates),
        min(e.n for e in estimates) - 1,
        max(q_max, Q_SEARCH_MIN),
    )
    kmax = max(kmax, 0)
    ks = np.arange(kmax + 1)

    counts = np.empty((len(estimates), c_grid.size), dtype=int)
    criteria = []
    for j, est in enumerate(estimates):
        base = _discarded_mass(est, kmax)
        penalty = spectral_penalty(est.n, est.T, est.bandwidth)
        ic = base[None, :] + np.outer(c_grid, ks) * penalty
        counts[j] = np.argmin(ic, axis=1)
        criteria.append(ic)

    scan, message = stability_scan(c_grid, counts, kmax)
    warnings: list[str] = []
    if message:
        log.warning(f"select_q: {message}")
        warnings.append(message)

    raw = int(scan.path[scan.chosen])
    q_hat = raw
    if raw > q_max:
        q_hat = q_max
        message = f"q criterion selected {raw}, clamped to q_max={q_max}"
        log.warning(message)
        warnings.append(message)
    log.debug(f"select_q: q_hat={q_hat} at c={scan.c:.3f}")
    return QSelection(
        q_hat=q_hat,
        raw=raw,
        criterion=criteria[-1][scan.chosen],
        scan=scan,
        warnings=tuple(warnings),
    )


def levels_eigenvalues(X: np.ndarray, k: int) -> np.ndarray:
    """Top ``k`` eigenvalues of ``(nT²)⁻¹ Σ_t x_t x_t'`` through the singular values of X."""
    n, T = X.shape
    s = linalg.svdvals(X)
    nu = s**2 / (n * T**2)
    out = np.zeros(k)
    out[: min(k, nu.size)] = nu[:k]
    return out


def _scale_by_differences(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    X = X - X.mean(axis=1, keepdims=True)
    dstd = np.diff(X, axis=1).std(axis=1, keepdims=True)
    return X / np.where(dstd > 0, dstd, 1.0)


def select_trend_count(
    X: np.ndarray,
    kmax: int = TREND_KMAX,
    *,
    c_grid: np.ndarray | None = None,
    subsamples: int = SELECTION_SUBSAMPLES,
    logger: LoggerProtocol | None = None,
) -> TrendSelection:
    """
    Number of common trends from the eigenvalues of the levels.

    Series are demeaned and scaled by the standard deviation of their
    differences. With ν_i the eigenvalues of ``(nT²)⁻¹ Σ x_t x_t'``, stationary
    directions give ``T ν_i = O(1)`` while trend directions grow with T, so on
    every nested sub-panel::

        k(c) = #{i <= kmax : T ν_i > c log T}

    and c is chosen by the same stability scan as :func:`select_q`. The ratios
    ``ν_i / ν_{i+1}`` are reported alongside; on their own they cannot separate
    trends from strong stationary factors when n is close to T.

    :param X: n×T detrended levels
    :param kmax: Largest count considered
    """
    log = _logger(logger)
    c_grid = default_c_grid() if c_grid is None else np.asarray(c_grid, dtype=float)
    Xs = _scale_by_differences(np.atleast_2d(X))
    n, T = Xs.shape
    kmax = max(min(int(kmax), n), 0)

    fractions = nested_fractions(subsamples) if subsamples > 1 else np.array([1.0])
    counts = np.empty((fractions.size, c_grid.size), dtype=int)
    for j, fraction in enumerate(fractions):
        n_j, T_j = nested_shape(n, T, fraction)
        nu = levels_eigenvalues(Xs[:n_j, :T_j], kmax)
        thresholds = np.outer(c_grid, np.ones(kmax)) * np.log(T_j)
        counts[j] = np.sum(T_j * nu[None, :] > thresholds, axis=1)

    scan, message = stability_scan(c_grid, counts, kmax)
    warnings: list[str] = []
    if message:
        log.warning(f"select_trend_count: {message}")
        warnings.append(message)

    nu = levels_eigenvalues(Xs, kmax + 1)
    ratios = nu[:-1] / np.where(nu[1:] > 0, nu[1:], np.inf)
    trend_count = int(scan.path[scan.chosen])
    log.debug(f"select_trend_count: {trend_count} at c={scan.c:.3f}")
    return TrendSelection(
        trend_count=trend_count,
        eigenvalues=nu[:kmax],
        ratios=ratios,
        scan=scan,
        warnings=tuple(warnings),
    )
