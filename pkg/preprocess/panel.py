"""
Whole-panel preprocessing: transform, optional winsorizing, alignment and detrending.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from preprocess.detrend import DetrendResult, LongRunKind, detrend
from preprocess.transforms import apply_transform, winsorize_series
from preprocess.types import PanelData
from utils.constants import DETREND_THRESHOLD, DeterministicKind, Transform
from utils.exceptions import PreprocessError
from utils.logging_interfaces import LoggerProtocol


@dataclass(frozen=True)
class PreprocessedPanel:
    """
    Model-ready panel.

    :ivar X: n×T detrended panel fed to selection and estimation
    :ivar Y: n×T transformed series before detrending (the additive target)
    :ivar ids: Series identifiers
    :ivar dates: Quarterly dates of the aligned sample
    :ivar detrend: Deterministic components, one per series
    :ivar panel: Source panel
    """

    X: np.ndarray
    Y: np.ndarray
    ids: tuple[str, ...]
    dates: pd.PeriodIndex
    detrend: tuple[DetrendResult, ...]
    panel: PanelData

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def T(self) -> int:
        return self.X.shape[1]

    def deterministic(self) -> np.ndarray:
        """n×T matrix of deterministic components."""
        return np.vstack([res.deterministic(self.T) for res in self.detrend])


def preprocess_panel(
    panel: PanelData,
    *,
    threshold: float = DETREND_THRESHOLD,
    max_lag: int | None = None,
    remove_drift: bool = True,
    demean: bool = True,
    long_run: LongRunKind = "bartlett",
    winsorize_limits: tuple[float, float] = (0.01, 0.01),
    logger: LoggerProtocol | None = None,
) -> PreprocessedPanel:
    """
    Transform and detrend every series of a quarterly panel.

    When any series is Δlog-transformed, the first period is dropped from
    all others so the panel stays rectangular.

    :raises PreprocessError: Propagated from the per-series steps, naming the series
    """
    if logger is None:
        from utils.logger import log as logger

    lose_first = any(meta.transform is Transform.DLOG for meta in panel.metas)
    start = 1 if lose_first else 0

    transformed = []
    for i, meta in enumerate(panel.metas):
        try:
            y = apply_transform(panel.values[i], meta.transform)
        except PreprocessError as exc:
            raise PreprocessError(f"series {meta.id!r}: {exc.message}", field=meta.id) from exc
        if meta.transform is not Transform.DLOG:
            y = y[start:]
        if meta.winsorize:
            y = winsorize_series(y, winsorize_limits)
        transformed.append(y)
    Y = np.vstack(transformed)

    results: list[DetrendResult] = []
    residuals = []
    for i, meta in enumerate(panel.metas):
        try:
            res, resid = detrend(
                Y[i],
                meta.detrend_mode,
                threshold=threshold,
                max_lag=max_lag,
                remove_drift=remove_drift,
                demean=demean,
                long_run=long_run,
            )
        except PreprocessError as exc:
            raise PreprocessError(f"series {meta.id!r}: {exc.message}", field=meta.id) from exc
        if res.fell_back:
            logger.warning(f"{meta.id}: negative long-run variance, mean mode forced")
        results.append(res)
        residuals.append(resid)

    n_trend = sum(res.mode_used is DeterministicKind.TREND for res in results)
    logger.info(f"Preprocessed {panel.n} series, T={Y.shape[1]} ({n_trend} with linear trend)")

    return PreprocessedPanel(
        X=np.vstack(residuals),
        Y=Y,
        ids=panel.ids,
        dates=panel.dates[start:],
        detrend=tuple(results),
        panel=panel,
    )
