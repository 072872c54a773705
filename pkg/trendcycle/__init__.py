"""
Trend-cycle decomposition of the estimated factors and of each observed series.
"""

from trendcycle.types import (
    CycleFit,
    SpectralReport,
    TCDecomposition,
    TrendFit,
    VariableComponents,
)
from trendcycle.decomposition import (
    decompose_factors,
    decompose_panel,
    decompose_variable,
    extract_cycles,
    extract_trends,
    longrun_cov,
    sample_orthogonality,
)
from trendcycle.spectral import spectral_report, univariate_densities

__all__ = [
    "TrendFit",
    "CycleFit",
    "TCDecomposition",
    "VariableComponents",
    "SpectralReport",
    "longrun_cov",
    "extract_trends",
    "extract_cycles",
    "decompose_factors",
    "decompose_variable",
    "decompose_panel",
    "sample_orthogonality",
    "spectral_report",
    "univariate_densities",
]
