"""
I(0)/I(1) classification of the idiosyncratic components.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from statsmodels.tsa.stattools import adfuller

from modelselect.types import RhoClassification, UnitRootResult
from utils.constants import ADF_LEVEL, RhoMode
from utils.exceptions import SelectionError
from utils.logging_interfaces import LoggerProtocol


def schwert_maxlag(T: int) -> int:
    """``floor(12 (T/100)^{1/4})``."""
    return int(np.floor(12.0 * (T / 100.0) ** 0.25))


def adf_test(
    series: np.ndarray, series_id: str, *, maxlag: int, level: float = ADF_LEVEL
) -> UnitRootResult:
    """
    ADF test with a constant and BIC lag selection up to ``maxlag``.

    Failing to reject the unit root at ``level`` gives rho = 1. A constant
    component is flagged stationary with a NaN statistic.

    :raises SelectionError: If the series is too short for ``maxlag``
    """
    series = np.asarray(series, dtype=float)
    if np.ptp(series) == 0:
        return UnitRootResult(series_id, float("nan"), 0.0, 0, rho=0)
    if maxlag > series.size // 2 - 2:
        raise SelectionError(
            f"series {series_id!r} of length {series.size} is too short for ADF lag {maxlag}",
            field="maxlag",
        )
    try:
        stat, pvalue, used_lag, *_ = adfuller(
            series, maxlag=maxlag, regression="c", autolag="BIC"
        )
    except ValueError as e:
        raise SelectionError(f"ADF test failed on {series_id!r}: {e}", field="maxlag") from e
    rho = 0 if pvalue < level else 1
    return UnitRootResult(series_id, float(stat), float(pvalue), int(used_lag), rho=rho)


def classify_idiosyncratic(
    X: np.ndarray,
    chi_hat: np.ndarray,
    *,
    ids: Sequence[str] | None = None,
    overrides: Sequence[RhoMode | str] | None = None,
    level: float = ADF_LEVEL,
    maxlag: int | None = None,
    logger: LoggerProtocol | None = None,
) -> RhoClassification:
    """
    Flag each ξ̂_i = x_i - χ̂_i as stationary (0) or random walk (1).

    :param X: n×T preprocessed panel
    :param chi_hat: n×T common components from principal components
    :param ids: Series identifiers; ``x0, x1, ...`` when omitted
    :param overrides: Per-series :class:`RhoMode`; forced values are applied after testing
    :param level: Test size
    :param maxlag: Largest ADF lag; ``floor(12 (T/100)^{1/4})`` by default
    :raises SelectionError: If the sample is too short for the lag order
    """
    if logger is None:
        from utils.logger import log as logger

    X = np.atleast_2d(np.asarray(X, dtype=float))
    chi_hat = np.atleast_2d(np.asarray(chi_hat, dtype=float))
    if X.shape != chi_hat.shape:
        raise SelectionError(
            f"chi_hat has shape {chi_hat.shape}, expected {X.shape}", field="chi_hat"
        )
    n, T = X.shape
    ids = [f"x{i}" for i in range(n)] if ids is None else list(ids)
    modes = [RhoMode.AUTO] * n if overrides is None else [RhoMode(m) for m in overrides]
    maxlag = schwert_maxlag(T) if maxlag is None else int(maxlag)

    xi = X - chi_hat
    results: list[UnitRootResult] = []
    for i in range(n):
        res = adf_test(xi[i], ids[i], maxlag=maxlag, level=level)
        if modes[i] is not RhoMode.AUTO:
            forced = 1 if modes[i] is RhoMode.FORCE_1 else 0
            res = UnitRootResult(
                res.series_id, res.statistic, res.pvalue, res.used_lag, rho=forced, overridden=True
            )
        results.append(res)

    rho = np.array([res.rho for res in results], dtype=int)
    logger.debug(f"classify_idiosyncratic: {int(rho.sum())} of {n} series flagged I(1)")
    return RhoClassification(rho=rho, results=tuple(results))
