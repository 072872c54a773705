"""
Mean-versus-linear-trend detrending.

For a series y_1..y_T the drift of Δy is tested with the ratio
``|m| / γ̄`` where m is the mean of Δy and γ̄ its long-run standard error.
A ratio of at least 1.96 selects a linear trend fitted by least squares;
otherwise the series keeps the drift ``m·t`` as its deterministic part.

The Bartlett ratio is divided by cv(b)/1.96, cv being the fixed-bandwidth
critical value at b = (J+1)/(T-1), so the 1.96 cut keeps a 5% size in short
samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import linalg

from utils.constants import (
    DETREND_MIN_LENGTH,
    DETREND_THRESHOLD,
    FIXED_B_BARTLETT,
    DetrendMode,
    DeterministicKind,
)
from utils.exceptions import PreprocessError

LongRunKind = Literal["bartlett", "literal"]


@dataclass(frozen=True)
class DetrendResult:
    """
    Deterministic component removed from one series.

    :ivar a_hat: Intercept (trend mode) or drift of Δy (mean mode)
    :ivar b_hat: Trend slope; 0 in mean mode
    :ivar mode_used: ``trend`` or ``mean``
    :ivar statistic: The drift ratio ``|m| / γ̄``
    :ivar offset: Residual mean removed in mean mode
    :ivar drift_removed: Whether ``a_hat·t`` was removed in mean mode
    :ivar fell_back: Long-run variance was negative and mean mode was forced
    """

    a_hat: float
    b_hat: float
    mode_used: DeterministicKind
    statistic: float
    offset: float = 0.0
    drift_removed: bool = True
    fell_back: bool = False

    def deterministic(self, T: int) -> np.ndarray:
        """Deterministic path at t = 1..T."""
        t = np.arange(1, T + 1, dtype=float)
        if self.mode_used is DeterministicKind.TREND:
            return self.a_hat + self.b_hat * t
        drift = self.a_hat * t if self.drift_removed else np.zeros(T)
        return drift + self.offset


def fixed_b_factor(b: float) -> float:
    """Ratio of the Bartlett fixed-b 5% critical value at bandwidth share ``b`` to 1.96."""
    c1, c2, c3 = FIXED_B_BARTLETT
    return 1.0 + (c1 * b + c2 * b**2 + c3 * b**3) / DETREND_THRESHOLD


def drift_statistic(
    y: np.ndarray, max_lag: int | None = None, kind: LongRunKind = "bartlett"
) -> tuple[float, float, bool]:
    """
    Drift ratio of a series.

    ``bartlett`` uses γ(0) + 2Σ(1 - j/(J+1))γ(j) and deflates the ratio by
    :func:`fixed_b_factor`; ``literal`` uses Σ_{j=1..J} γ(j), which can be negative.

    :return: (statistic, mean of Δy, radicand_negative)
    """
    dy = np.diff(np.asarray(y, dtype=float))
    n = dy.size
    m = float(np.mean(dy))
    J = int(np.floor(n ** (1.0 / 3.0))) if max_lag is None else int(max_lag)
    J = max(0, min(J, n - 1))
    centered = dy - m
    gammas = np.array([centered[j:] @ centered[: n - j] / n for j in range(J + 1)])

    if kind == "bartlett":
        weights = 1.0 - np.arange(1, J + 1) / (J + 1)
        lrv = gammas[0] + 2.0 * float(weights @ gammas[1:])
    else:
        lrv = float(np.sum(gammas[1:]))

    if lrv < 0:
        return 0.0, m, True
    scale = np.sqrt(lrv / n)
    if scale == 0.0:
        return (0.0 if m == 0.0 else np.inf), m, False
    statistic = abs(m) / scale
    if kind == "bartlett":
        statistic /= fixed_b_factor((J + 1) / n)
    return statistic, m, False


def detrend(
    series: np.ndarray,
    mode: DetrendMode | str = DetrendMode.AUTO,
    *,
    threshold: float = DETREND_THRESHOLD,
    max_lag: int | None = None,
    remove_drift: bool = True,
    demean: bool = True,
    long_run: LongRunKind = "bartlett",
) -> tuple[DetrendResult, np.ndarray]:
    """
    Remove the deterministic component of a series.

    :param series: y_1..y_T
    :param mode: ``auto``, ``force_mean`` or ``force_trend``
    :param threshold: Drift ratio selecting trend mode
    :param max_lag: Autocovariance lags J; floor(T^{1/3}) by default
    :param remove_drift: Remove ``m·t`` in mean mode
    :param demean: Remove the residual mean in mean mode
    :param long_run: Long-run variance estimator of the drift ratio
    :return: (result, residual) with ``residual + result.deterministic(T) == y``
    :raises PreprocessError: If T < 8 or the series is not finite
    """
    mode = DetrendMode(mode)
    y = np.asarray(series, dtype=float)
    T = y.size
    if T < DETREND_MIN_LENGTH:
        raise PreprocessError(
            f"detrending needs at least {DETREND_MIN_LENGTH} observations, got {T}"
        )
    bad = np.flatnonzero(~np.isfinite(y))
    if bad.size:
        raise PreprocessError("non-finite observation", index=int(bad[0]))

    statistic, drift, fell_back = drift_statistic(y, max_lag, long_run)
    if mode is DetrendMode.FORCE_TREND:
        use_trend = True
    elif mode is DetrendMode.FORCE_MEAN or fell_back:
        use_trend = False
    else:
        use_trend = statistic >= threshold

    t = np.arange(1, T + 1, dtype=float)
    if use_trend:
        design = np.column_stack([np.ones(T), t])
        (a_hat, b_hat), *_ = linalg.lstsq(design, y)
        result = DetrendResult(
            a_hat=float(a_hat),
            b_hat=float(b_hat),
            mode_used=DeterministicKind.TREND,
            statistic=float(statistic),
            drift_removed=False,
        )
    else:
        residual = y - drift * t if remove_drift else y.copy()
        offset = float(np.mean(residual)) if demean else 0.0
        result = DetrendResult(
            a_hat=drift,
            b_hat=0.0,
            mode_used=DeterministicKind.MEAN,
            statistic=float(statistic),
            offset=offset,
            drift_removed=remove_drift,
            fell_back=fell_back,
        )
    return result, y - result.deterministic(T)


def add_back_deterministic(component: np.ndarray, result: DetrendResult) -> np.ndarray:
    """Inverse of :func:`detrend`: add the deterministic path to a component series."""
    component = np.asarray(component, dtype=float)
    return component + result.deterministic(component.shape[-1])
