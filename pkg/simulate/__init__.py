"""
Synthetic data with known ground truth and exact verification oracles.
"""

from simulate.dgp import DGPConfig, GroundTruth, gen_dfm
from simulate.metrics import aligned_factor_error, max_principal_angle, trace_r2
from simulate.oracle import (
    OracleFilterMoments,
    OracleMoments,
    oracle_conditional_moments,
    oracle_filtered_moments,
)

__all__ = [
    "DGPConfig",
    "GroundTruth",
    "gen_dfm",
    "OracleMoments",
    "OracleFilterMoments",
    "oracle_conditional_moments",
    "oracle_filtered_moments",
    "trace_r2",
    "aligned_factor_error",
    "max_principal_angle",
]
