"""
Data treatment before estimation: aggregation, transforms and detrending.
"""

from preprocess.detrend import DetrendResult, add_back_deterministic, detrend, drift_statistic
from preprocess.panel import PreprocessedPanel, preprocess_panel
from preprocess.transforms import aggregate_to_quarterly, apply_transform, winsorize_series
from preprocess.types import PanelData, SeriesMeta

__all__ = [
    "SeriesMeta",
    "PanelData",
    "DetrendResult",
    "PreprocessedPanel",
    "aggregate_to_quarterly",
    "apply_transform",
    "winsorize_series",
    "detrend",
    "drift_statistic",
    "add_back_deterministic",
    "preprocess_panel",
]
