"""
Combination of the selection criteria into one admissible set of dimensions.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from em.initialization import pca_factors
from modelselect.criteria import select_q, select_trend_count
from modelselect.spectral import spectral_density_eigs
from modelselect.types import (
    QSelection,
    RhoClassification,
    RSelection,
    SelectionReport,
    TrendSelection,
)
from modelselect.unitroot import classify_idiosyncratic
from modelselect.variance import select_r
from utils.constants import ADF_LEVEL, TOL_SHARE, TREND_KMAX, RhoMode
from utils.logging_interfaces import LoggerProtocol


@dataclass(frozen=True)
class SelectionOverrides:
    """User-fixed dimensions; None means estimate."""

    q: int | None = None
    r: int | None = None
    d: int | None = None

    def as_dict(self) -> dict[str, int]:
        return {k: v for k, v in (("q", self.q), ("r", self.r), ("d", self.d)) if v is not None}


def resolve_selection(
    q_sel: QSelection | None,
    trend_sel: TrendSelection | None,
    r_sel: RSelection | None,
    rho_cls: RhoClassification,
    *,
    overrides: SelectionOverrides | None = None,
    logger: LoggerProtocol | None = None,
) -> SelectionReport:
    """
    Merge criteria and overrides into a :class:`SelectionReport`.

    Overrides win over criteria. The trend count is clamped into [0, q̂] with a
    warning when the two criteria disagree.
    """
    if logger is None:
        from utils.logger import log as logger

    overrides = overrides or SelectionOverrides()
    warnings: list[str] = []
    for sel in (q_sel, trend_sel, r_sel):
        if sel is not None:
            warnings.extend(sel.warnings)

    q_hat = overrides.q if overrides.q is not None else (q_sel.q_hat if q_sel else 0)
    if overrides.d is not None:
        trend_count = q_hat - overrides.d
    else:
        trend_count = trend_sel.trend_count if trend_sel else 0
    if not 0 <= trend_count <= q_hat:
        clamped = int(np.clip(trend_count, 0, q_hat))
        message = f"trend count {trend_count} outside [0, q={q_hat}], clamped to {clamped}"
        logger.warning(message)
        warnings.append(message)
        trend_count = clamped
    r_hat = overrides.r if overrides.r is not None else (r_sel.r_hat if r_sel else q_hat)

    report = SelectionReport(
        q_hat=int(q_hat),
        trend_count_hat=int(trend_count),
        r_hat=int(r_hat),
        d_hat=int(q_hat - trend_count),
        table=r_sel.table if r_sel else None,
        rho=rho_cls.rho,
        rho_results=rho_cls.results,
        overrides=overrides.as_dict(),
        warnings=tuple(warnings),
    )
    if not report.is_admissible:
        logger.warning(
            f"selection q={report.q_hat} r={report.r_hat} d={report.d_hat} "
            "violates 0 < d < q <= r"
        )
    return report


def select_model(
    X: np.ndarray,
    *,
    ids: Sequence[str] | None = None,
    rho_modes: Sequence[RhoMode | str] | None = None,
    q_max: int = 10,
    r_max: int = 20,
    trend_kmax: int = TREND_KMAX,
    tol_share: float = TOL_SHARE,
    adf_level: float = ADF_LEVEL,
    bandwidth: int | None = None,
    overrides: SelectionOverrides | None = None,
    logger: LoggerProtocol | None = None,
) -> SelectionReport:
    """
    Run every criterion on a preprocessed panel: trends, then q, then r, then
    the idiosyncratic unit-root tests on the principal-component residuals.

    :param X: n×T preprocessed (detrended) levels
    :param ids: Series identifiers
    :param rho_modes: Per-series I(1) overrides
    :param q_max: Upper bound for q; reduced to n - 1 on small panels
    :param r_max: Upper bound for r; reduced to n on small panels
    """
    if logger is None:
        from utils.logger import log as logger

    overrides = overrides or SelectionOverrides()
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, _ = X.shape
    dX = np.diff(X, axis=1)

    spec_est = spectral_density_eigs(dX, bandwidth)
    q_sel = select_q(spec_est, min(q_max, n - 1), logger=logger) if overrides.q is None else None
    q_hat = overrides.q if overrides.q is not None else q_sel.q_hat  # type: ignore[union-attr]

    trend_sel = None
    if overrides.d is None:
        trend_sel = select_trend_count(X, trend_kmax, logger=logger)

    r_sel = None
    if overrides.r is None:
        r_sel = select_r(
            X, q_hat, max(min(r_max, n), q_hat), tol_share, spec_est=spec_est, logger=logger
        )
    r_hat = overrides.r if overrides.r is not None else r_sel.r_hat  # type: ignore[union-attr]

    if r_hat > 0:
        Lambda, F = pca_factors(X, r_hat)
        chi = Lambda @ F
    else:
        chi = np.zeros_like(X)
    rho_cls = classify_idiosyncratic(
        X, chi, ids=ids, overrides=rho_modes, level=adf_level, logger=logger
    )
    return resolve_selection(
        q_sel, trend_sel, r_sel, rho_cls, overrides=overrides, logger=logger
    )
