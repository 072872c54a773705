"""
Panel and per-series metadata types.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from utils.constants import DetrendMode, Frequency, RhoMode, Transform


class SeriesMeta(BaseModel):
    """
    Treatment of one input series.

    ``transform`` accepts the names ``none``/``log``/``dlog`` or the codes 0/1/2.
    """

    model_config = ConfigDict(frozen=True, use_enum_values=False)

    id: str = Field(min_length=1)
    transform: Transform = Transform.NONE
    sa: bool = True
    detrend_mode: DetrendMode = DetrendMode.AUTO
    tie_group: str | None = None
    rho_mode: RhoMode = RhoMode.AUTO
    frequency: Frequency = Frequency.QUARTERLY
    winsorize: bool = False

    @field_validator("transform", mode="before")
    @classmethod
    def parse_transform(cls, v):
        if isinstance(v, Transform):
            return v
        return Transform.from_string(v)

    @field_validator("tie_group", mode="before")
    @classmethod
    def empty_tie_group(cls, v):
        if v is None:
            return None
        if isinstance(v, float) and np.isnan(v):
            return None
        v = str(v).strip()
        return v or None


@dataclass(frozen=True)
class PanelData:
    """
    n×T observations with quarterly dates and per-series metadata.

    :ivar values: n×T matrix, one row per series
    :ivar ids: Series identifiers, in row order
    :ivar dates: Quarterly PeriodIndex of length T
    :ivar metas: Metadata aligned with ``ids``
    """

    values: np.ndarray
    ids: tuple[str, ...]
    dates: pd.PeriodIndex
    metas: tuple[SeriesMeta, ...]

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def T(self) -> int:
        return self.values.shape[1]

    def tie_groups(self) -> dict[str, list[int]]:
        """Row indices of every tie group with at least two members."""
        groups: dict[str, list[int]] = {}
        for i, meta in enumerate(self.metas):
            if meta.tie_group:
                groups.setdefault(meta.tie_group, []).append(i)
        return {name: rows for name, rows in groups.items() if len(rows) > 1}
