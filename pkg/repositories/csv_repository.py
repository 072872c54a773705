"""
CSV panel repository.

Panel files have a date column first (ISO dates or ``YYYYQn``) followed by
one column per series; every cell must hold a number. Metadata files hold one
row per series with the :class:`~preprocess.types.SeriesMeta` fields as
columns; only ``id`` is required.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import ValidationError

from preprocess.transforms import aggregate_to_quarterly
from preprocess.types import PanelData, SeriesMeta
from repositories.base import PanelRepository
from utils.constants import Frequency
from utils.exceptions import PanelFormatError, PreprocessError
from utils.formatters import NUMBER_FORMAT
from utils.logging_interfaces import LoggerProtocol

_QUARTER = re.compile(r"^\s*(\d{4})\s*[Qq]([1-4])\s*$")
_BOOL_FIELDS = ("sa", "winsorize")


def parse_dates(labels: list[str]) -> tuple[pd.PeriodIndex | pd.DatetimeIndex, bool]:
    """
    Parse date labels.

    :return: (index, quarterly) where ``quarterly`` tells whether labels were ``YYYYQn``
    :raises PanelFormatError: On an unparseable label, naming its data row
    """
    if labels and all(_QUARTER.match(label) for label in labels):
        matches = [_QUARTER.match(label) for label in labels]
        periods = [pd.Period(year=int(m[1]), quarter=int(m[2]), freq="Q") for m in matches]
        return pd.PeriodIndex(periods, freq="Q"), True
    stamps = []
    for row, label in enumerate(labels, start=1):
        try:
            stamps.append(pd.Timestamp(label.strip()))
        except (ValueError, TypeError):
            raise PanelFormatError(f"unparseable date {label!r}", row=row, column="date") from None
    return pd.DatetimeIndex(stamps), False


def _check_monotone(index: pd.Index) -> None:
    values = index.asi8
    steps = np.diff(values)
    bad = np.flatnonzero(steps <= 0)
    if bad.size:
        raise PanelFormatError(
            "dates are not strictly increasing", row=int(bad[0]) + 2, column="date"
        )


def _check_gapless(periods: pd.PeriodIndex) -> None:
    full = pd.period_range(periods[0], periods[-1], freq="Q")
    if len(full) != len(periods):
        missing = full.difference(periods)
        raise PanelFormatError(f"quarter {missing[0]} is missing", column="date")


def _panel_frequency(metas: list[SeriesMeta]) -> Frequency:
    frequencies = {meta.frequency for meta in metas}
    if len(frequencies) > 1:
        names = ", ".join(sorted(f.value for f in frequencies))
        raise PanelFormatError(f"series in one panel file must share a frequency, got {names}")
    return frequencies.pop() if frequencies else Frequency.QUARTERLY


class CsvPanelRepository(PanelRepository):
    """
    Reads and writes panels as CSV files.

    :ivar _logger: Logger for ingestion summaries
    """

    def __init__(self, *, logger: LoggerProtocol | None = None):
        if logger is None:
            from utils.logger import log as logger
        self._logger = logger

    def read_metadata(self, source: Path | str) -> list[SeriesMeta]:
        """
        Parse a metadata CSV into :class:`SeriesMeta` records.

        :raises PanelFormatError: On a missing ``id`` column, duplicate ids or invalid values
        """
        frame = pd.read_csv(source, dtype=str, keep_default_na=False, encoding="utf-8")
        frame.columns = [c.strip() for c in frame.columns]
        if "id" not in frame.columns:
            raise PanelFormatError("metadata has no 'id' column", row=0, column="id")
        metas: list[SeriesMeta] = []
        for row, record in enumerate(frame.to_dict(orient="records"), start=1):
            fields = {
                k: v.strip()
                for k, v in record.items()
                if k in SeriesMeta.model_fields and v.strip() != ""
            }
            for name in _BOOL_FIELDS:
                if name in fields:
                    fields[name] = fields[name].lower() in ("1", "true", "yes", "y")
            try:
                metas.append(SeriesMeta(**fields))
            except (ValidationError, ValueError) as e:
                raise PanelFormatError(f"invalid metadata: {e}", row=row) from e
        ids = [meta.id for meta in metas]
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise PanelFormatError(f"duplicate metadata ids: {', '.join(dupes)}", column="id")
        return metas

    def read_panel(self, source: Path | str, metadata: Path | str | None = None) -> PanelData:
        """
        Parse a panel CSV.

        Monthly or daily files (declared through the metadata ``frequency``) are
        averaged to calendar quarters before the gapless check.

        :raises PanelFormatError: On a missing or non-numeric cell (naming row and
            column), non-increasing dates or a gap in the quarterly sequence
        """
        frame = pd.read_csv(source, dtype=str, keep_default_na=False, encoding="utf-8")
        if frame.shape[1] < 2:
            raise PanelFormatError("panel needs a date column and at least one series", row=0)
        frame.columns = [str(c).strip() for c in frame.columns]
        date_col, ids = frame.columns[0], list(frame.columns[1:])
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise PanelFormatError(f"duplicate series ids: {', '.join(dupes)}", row=0)

        values = np.empty((len(ids), len(frame)))
        for j, series_id in enumerate(ids):
            cells = frame[series_id].str.strip()
            numeric = pd.to_numeric(cells, errors="coerce")
            bad = np.flatnonzero(~np.isfinite(numeric.to_numpy(dtype=float)))
            if bad.size:
                row = int(bad[0]) + 1
                cell = cells.iloc[bad[0]]
                missing = pd.isna(cell) or cell == ""
                kind = "missing value" if missing else f"non-numeric value {cell!r}"
                raise PanelFormatError(kind, row=row, column=series_id)
            values[j] = numeric.to_numpy(dtype=float)

        index, quarterly = parse_dates(frame[date_col].fillna("").tolist())
        _check_monotone(index)
        metas = self._align_metadata(ids, metadata)
        frequency = _panel_frequency(metas)

        if frequency is Frequency.QUARTERLY:
            periods = index if quarterly else index.to_period("Q")
            if not periods.is_unique:
                raise PanelFormatError("two observations fall in one quarter", column=date_col)
        else:
            stamps = index.to_timestamp() if quarterly else index
            try:
                rows = [
                    aggregate_to_quarterly(pd.Series(v, index=stamps), frequency) for v in values
                ]
            except PreprocessError as e:
                raise PanelFormatError(
                    f"cannot aggregate to quarters: {e.message}", column=date_col
                ) from e
            periods = pd.PeriodIndex(rows[0].index, freq="Q")
            values = np.vstack([row.to_numpy() for row in rows])
        _check_gapless(periods)

        self._logger.info(
            f"Read panel {Path(source).name}: {len(ids)} series x {len(periods)} quarters"
        )
        return PanelData(values=values, ids=tuple(ids), dates=periods, metas=tuple(metas))

    def _align_metadata(self, ids: list[str], metadata: Path | str | None) -> list[SeriesMeta]:
        if metadata is None:
            return [SeriesMeta(id=i) for i in ids]
        by_id = {meta.id: meta for meta in self.read_metadata(metadata)}
        missing = [i for i in ids if i not in by_id]
        if missing:
            raise PanelFormatError(f"series without metadata: {', '.join(missing)}", row=0)
        extra = sorted(set(by_id) - set(ids))
        if extra:
            self._logger.warning(
                f"metadata for series absent from the panel ignored: {', '.join(extra)}"
            )
        return [by_id[i] for i in ids]

    def write_panel(self, panel: PanelData, destination: Path | str) -> Path:
        """Write dates as ``YYYYQn`` and values at 15 significant digits."""
        path = Path(destination)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(panel.values.T, columns=list(panel.ids))
        frame.insert(0, "date", [f"{p.year}Q{p.quarter}" for p in panel.dates])
        frame.to_csv(path, index=False, float_format=NUMBER_FORMAT, lineterminator="\n")
        return path

    def write_metadata(self, metas: list[SeriesMeta], destination: Path | str) -> Path:
        path = Path(destination)
        path.parent.mkdir(parents=True, exist_ok=True)
        rows = [
            {
                "id": m.id,
                "transform": m.transform.value,
                "sa": int(m.sa),
                "detrend_mode": m.detrend_mode.value,
                "tie_group": m.tie_group or "",
                "rho_mode": m.rho_mode.value,
                "frequency": m.frequency.value,
                "winsorize": int(m.winsorize),
            }
            for m in metas
        ]
        pd.DataFrame(rows).to_csv(path, index=False, lineterminator="\n")
        return path
