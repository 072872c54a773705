"""
Frequency aggregation, log transforms and outlier winsorizing.
"""

from __future__ import annotations

import numpy as np
import pandas as pd
from scipy.stats import mstats

from utils.constants import Frequency, Transform
from utils.exceptions import PreprocessError

MONTHS_PER_QUARTER = 3


def _as_frequency(frequency: Frequency | str) -> Frequency:
    return frequency if isinstance(frequency, Frequency) else Frequency(str(frequency).lower())


def _aggregate_indexed(series: pd.Series, frequency: Frequency) -> pd.Series:
    index = series.index
    if isinstance(index, pd.PeriodIndex):
        index = index.to_timestamp()
    if not isinstance(index, pd.DatetimeIndex):
        raise PreprocessError(f"{frequency.value} series needs a date index to aggregate")
    values = pd.Series(np.asarray(series, dtype=float), index=index).sort_index()
    quarters = values.index.to_period("Q")

    grouped = values.groupby(quarters)
    means = grouped.mean()
    full = pd.period_range(means.index.min(), means.index.max(), freq="Q")
    missing = full.difference(means.index)
    if len(missing):
        raise PreprocessError(f"empty quarter {missing[0]}", index=int(full.get_loc(missing[0])))

    # partial quarters at either end are dropped
    if frequency is Frequency.MONTHLY:
        complete = grouped.count() == MONTHS_PER_QUARTER
    else:
        last_month = grouped.apply(lambda g: g.index.max().month)
        first_month = grouped.apply(lambda g: g.index.min().month)
        complete = (last_month % 3 == 0) & ((first_month - 1) % 3 == 0)
    keep = complete.copy()
    keep.iloc[1:-1] = True
    return means[keep.to_numpy()]


def aggregate_to_quarterly(
    series: pd.Series | np.ndarray, frequency: Frequency | str
) -> pd.Series | np.ndarray:
    """
    Average monthly or daily observations within calendar quarters.

    Plain arrays are read as consecutive months starting at a quarter; a
    trailing partial quarter is dropped. Indexed series are grouped by
    calendar quarter and partial quarters at both ends are dropped. Quarterly
    input is returned unchanged.

    :raises PreprocessError: On an empty quarter or a daily series without dates
    """
    frequency = _as_frequency(frequency)
    if frequency is Frequency.QUARTERLY:
        return series

    if isinstance(series, pd.Series):
        return _aggregate_indexed(series, frequency)

    if frequency is Frequency.DAILY:
        raise PreprocessError("daily series needs a date index to aggregate")
    values = np.asarray(series, dtype=float)
    quarters = values.size // MONTHS_PER_QUARTER
    if quarters == 0:
        raise PreprocessError("series is shorter than one quarter", index=0)
    blocks = values[: quarters * MONTHS_PER_QUARTER].reshape(quarters, MONTHS_PER_QUARTER)
    return blocks.mean(axis=1)


def apply_transform(series: np.ndarray, transform: Transform | str | int) -> np.ndarray:
    """
    Apply none / log / Δlog.

    :return: Transformed series; Δlog output is one observation shorter
    :raises PreprocessError: On a nonpositive value under the log, with its index
    """
    if not isinstance(transform, Transform):
        transform = Transform.from_string(transform)
    values = np.asarray(series, dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise PreprocessError("non-finite observation", index=int(bad[0]))
    if transform is Transform.NONE:
        return values.copy()

    nonpositive = np.flatnonzero(values <= 0)
    if nonpositive.size:
        raise PreprocessError(
            f"nonpositive value {values[nonpositive[0]]!r} under log", index=int(nonpositive[0])
        )
    logs = np.log(values)
    if transform is Transform.LOG:
        return logs
    return np.diff(logs)


def winsorize_series(series: np.ndarray, limits: tuple[float, float] = (0.01, 0.01)) -> np.ndarray:
    """Clip the given lower/upper tail shares to the nearest retained value."""
    return np.asarray(mstats.winsorize(np.asarray(series, dtype=float), limits=limits))
