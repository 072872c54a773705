"""
Selection of q, the number of common trends, r and the idiosyncratic I(1) flags.
"""

from modelselect.types import (
    ExplainedVariance,
    QSelection,
    RhoClassification,
    RSelection,
    SelectionReport,
    SpectralEstimate,
    StabilityScan,
    TrendSelection,
    UnitRootResult,
)
from modelselect.spectral import default_bandwidth, spectral_density_eigs, standardize_rows
from modelselect.criteria import select_q, select_trend_count, spectral_penalty, stability_scan
from modelselect.variance import explained_variance, match_explained_variance, select_r
from modelselect.unitroot import adf_test, classify_idiosyncratic, schwert_maxlag
from modelselect.report import SelectionOverrides, resolve_selection, select_model

__all__ = [
    "ExplainedVariance",
    "QSelection",
    "RhoClassification",
    "RSelection",
    "SelectionReport",
    "SpectralEstimate",
    "StabilityScan",
    "TrendSelection",
    "UnitRootResult",
    "SelectionOverrides",
    "default_bandwidth",
    "spectral_density_eigs",
    "standardize_rows",
    "select_q",
    "select_trend_count",
    "spectral_penalty",
    "stability_scan",
    "explained_variance",
    "match_explained_variance",
    "select_r",
    "adf_test",
    "classify_idiosyncratic",
    "schwert_maxlag",
    "resolve_selection",
    "select_model",
]
