"""
Batch front door: run configuration, stage orchestration and output files.
"""

from pipeline.config import EMIT_FLAGS, EmitFlags, RunConfig
from pipeline.diagnostics import (
    SeasonalityRow,
    TieDiscrepancy,
    quarterly_growth_means,
    residual_seasonality,
    tie_discrepancies,
)
from pipeline.emitters import OutputWriter
from pipeline.manifest import MANIFEST_FILE, RunManifest, StageRecord
from pipeline.runner import STAGE_EXIT_CODES, Pipeline, PipelineResult, run_pipeline
from pipeline.simulation import SimulatedPanel, simulated_ids, truth_summary, write_simulation

__all__ = [
    "EMIT_FLAGS",
    "EmitFlags",
    "MANIFEST_FILE",
    "OutputWriter",
    "Pipeline",
    "PipelineResult",
    "RunConfig",
    "RunManifest",
    "STAGE_EXIT_CODES",
    "SeasonalityRow",
    "SimulatedPanel",
    "StageRecord",
    "TieDiscrepancy",
    "quarterly_growth_means",
    "residual_seasonality",
    "run_pipeline",
    "simulated_ids",
    "tie_discrepancies",
    "truth_summary",
    "write_simulation",
]
