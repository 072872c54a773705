"""
Post-fit diagnostics for tied series: residual seasonality and the discrepancy
between the two measurements of a tied pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class SeasonalityRow:
    """
    Average growth of one series by calendar quarter.

    :ivar series_id: Identifier, suffixed with the component name
    :ivar by_quarter: Mean first difference in Q1..Q4
    :ivar spread: Largest minus smallest quarterly mean
    """

    series_id: str
    by_quarter: tuple[float, ...]
    spread: float


@dataclass(frozen=True)
class TieDiscrepancy:
    """
    ``std(Δχ̂_A - Δχ̂_B)`` against ``std(Δx_A - Δx_B)`` for one tied pair.
    """

    group: str
    first: str
    second: str
    common_std: float
    observed_std: float

    @property
    def ratio(self) -> float:
        return self.common_std / self.observed_std if self.observed_std > 0 else float("nan")


def quarterly_growth_means(
    series: np.ndarray, dates: pd.PeriodIndex, window: int | None = None, series_id: str = ""
) -> SeasonalityRow:
    """
    Mean of Δy_t grouped by the quarter of t.

    :param series: Levels aligned with ``dates``
    :param window: Keep only the last ``window`` quarters; whole sample when omitted
    """
    y = np.asarray(series, dtype=float)
    quarters = np.asarray(dates.quarter)
    if window is not None:
        y, quarters = y[-window:], quarters[-window:]
    growth = pd.Series(np.diff(y)).groupby(quarters[1:]).mean()
    means = tuple(float(growth.get(k, np.nan)) for k in (1, 2, 3, 4))
    finite = [m for m in means if np.isfinite(m)]
    spread = max(finite) - min(finite) if finite else float("nan")
    return SeasonalityRow(series_id=series_id, by_quarter=means, spread=spread)


def residual_seasonality(
    ids: tuple[str, ...],
    observed: np.ndarray,
    common: np.ndarray,
    dates: pd.PeriodIndex,
    groups: dict[str, list[int]],
    window: int | None = None,
) -> list[SeasonalityRow]:
    """Seasonality table for every tied series, observed and common component."""
    rows: list[SeasonalityRow] = []
    for members in groups.values():
        for i in members:
            for label, block in (("observed", observed), ("common", common)):
                rows.append(quarterly_growth_means(block[i], dates, window, f"{ids[i]}:{label}"))
    return rows


def tie_discrepancies(
    ids: tuple[str, ...], observed: np.ndarray, common: np.ndarray, groups: dict[str, list[int]]
) -> list[TieDiscrepancy]:
    """Discrepancy of every pair inside every tie group."""
    out: list[TieDiscrepancy] = []
    dx, dchi = np.diff(observed, axis=1), np.diff(common, axis=1)
    for name, members in groups.items():
        for a, b in combinations(members, 2):
            out.append(
                TieDiscrepancy(
                    group=name,
                    first=ids[a],
                    second=ids[b],
                    common_std=float(np.std(dchi[a] - dchi[b])),
                    observed_std=float(np.std(dx[a] - dx[b])),
                )
            )
    return out
