"""
Plot-ready output files.

Every file is a CSV with a header row; time series have a leading ``date``
column in ``YYYYQn`` form and numbers carry 15 significant digits.
"""

from __future__ import annotations

import json
import shutil
from pathlib import Path

import numpy as np
import pandas as pd

from modelselect.types import SelectionReport
from pipeline.diagnostics import SeasonalityRow, TieDiscrepancy
from repositories.artifact_repository import quarter_labels, write_matrix
from trendcycle.types import SpectralReport, TCDecomposition, VariableComponents
from utils.formatters import NUMBER_FORMAT
from utils.logging_interfaces import LoggerProtocol


def _frame_to_csv(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, float_format=NUMBER_FORMAT, lineterminator="\n")
    return path


class OutputWriter:
    """
    Writes run outputs under one directory and remembers what it wrote.

    :ivar root: Output directory
    :ivar written: Paths written so far, relative to ``root``, in write order
    """

    def __init__(self, root: Path | str, *, logger: LoggerProtocol | None = None):
        if logger is None:
            from utils.logger import log as logger
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.written: list[str] = []
        self._logger = logger

    def _path(self, name: str) -> Path:
        path = self.root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(name)
        self._logger.debug(f"writing {path}")
        return path

    def copy(self, source: Path | str, name: str) -> Path:
        """Copy an existing file into the output directory under ``name``."""
        target = self.root / name
        if Path(source).resolve() != target.resolve():
            shutil.copyfile(source, self._path(name))
        else:
            self.written.append(name)
        return target

    def _series(self, name: str, dates: pd.PeriodIndex, block: np.ndarray, prefix: str) -> Path:
        """k×T block written with one column per row of the block."""
        block = np.atleast_2d(block)
        columns = [f"{prefix}{j + 1}" for j in range(block.shape[0])]
        return write_matrix(
            self._path(name),
            block.T,
            columns=columns,
            index=quarter_labels(dates),
            index_label="date",
        )

    def factors(self, dates: pd.PeriodIndex, factors: np.ndarray) -> Path:
        return self._series("factors.csv", dates, factors, "F")

    def trends(self, dates: pd.PeriodIndex, tc: TCDecomposition) -> Path:
        return self._series("trends.csv", dates, tc.trends, "trend")

    def cycles(self, dates: pd.PeriodIndex, tc: TCDecomposition) -> list[Path]:
        return [
            self._series("cycles.csv", dates, tc.cycles, "cycle"),
            self._series("residual_cycles.csv", dates, tc.residual_cycles, "residual_cycle"),
        ]

    def per_variable(
        self, dates: pd.PeriodIndex, components: list[VariableComponents], Y: np.ndarray
    ) -> list[Path]:
        """
        One file per series with the input and its additive parts, plus a
        ``common/<id>.csv`` file holding only the common component.
        """
        labels = quarter_labels(dates)
        paths = []
        for i, comp in enumerate(components):
            frame = pd.DataFrame(
                {
                    "date": labels,
                    "input": Y[i],
                    "deterministic": comp.deterministic,
                    "trend": comp.trend,
                    "cycle": comp.cycle,
                    "residual_cycle": comp.residual_cycle,
                    "idiosyncratic": comp.idiosyncratic,
                }
            )
            paths.append(_frame_to_csv(frame, self._path(f"per_variable/{comp.series_id}.csv")))
            common = pd.DataFrame({"date": labels, "common": comp.common})
            paths.append(_frame_to_csv(common, self._path(f"common/{comp.series_id}.csv")))
        return paths

    def mse_trace(self, dates: pd.PeriodIndex, traces: np.ndarray) -> Path:
        frame = pd.DataFrame(
            {
                "date": quarter_labels(dates),
                "predicted": traces[:, 0],
                "filtered": traces[:, 1],
                "smoothed": traces[:, 2],
            }
        )
        return _frame_to_csv(frame, self._path("mse_trace.csv"))

    def spectra(self, report: SpectralReport) -> list[Path]:
        columns: dict[str, np.ndarray] = {"frequency": report.frequencies}
        for prefix, block in (
            ("trend", report.trends),
            ("cycle", report.cycles),
            ("residual_cycle", report.residual_cycles),
        ):
            for j, row in enumerate(block):
                columns[f"{prefix}{j + 1}"] = row
        density = _frame_to_csv(pd.DataFrame(columns), self._path("spectra.csv"))
        variances = pd.DataFrame(
            {"group": list(report.variances), "variance": list(report.variances.values())}
        )
        return [density, _frame_to_csv(variances, self._path("spectra_variance.csv"))]

    def selection_report(self, report: SelectionReport) -> list[Path]:
        """``selection.json`` with the dimensions, the variance table and the unit-root tests."""
        summary = {
            "q_hat": report.q_hat,
            "trend_count_hat": report.trend_count_hat,
            "r_hat": report.r_hat,
            "d_hat": report.d_hat,
            "admissible": report.is_admissible,
            "overrides": report.overrides,
            "warnings": list(report.warnings),
        }
        path = self._path("selection.json")
        path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        paths = [path]
        if report.table is not None:
            k = np.arange(1, report.table.static.size + 1)
            dynamic = np.full(k.size, np.nan)
            dynamic[: report.table.dynamic.size] = report.table.dynamic[: k.size]
            table = pd.DataFrame({"k": k, "dynamic": dynamic, "static": report.table.static})
            paths.append(_frame_to_csv(table, self._path("explained_variance.csv")))
        rho = pd.DataFrame(
            [
                {
                    "id": res.series_id,
                    "statistic": res.statistic,
                    "pvalue": res.pvalue,
                    "used_lag": res.used_lag,
                    "rho": res.rho,
                    "overridden": int(res.overridden),
                }
                for res in report.rho_results
            ],
            columns=["id", "statistic", "pvalue", "used_lag", "rho", "overridden"],
        )
        paths.append(_frame_to_csv(rho, self._path("rho.csv")))
        return paths

    def seasonality(self, rows: list[SeasonalityRow]) -> Path:
        frame = pd.DataFrame(
            [
                {
                    "id": row.series_id,
                    **{f"Q{k + 1}": v for k, v in enumerate(row.by_quarter)},
                    "spread": row.spread,
                }
                for row in rows
            ],
            columns=["id", "Q1", "Q2", "Q3", "Q4", "spread"],
        )
        return _frame_to_csv(frame, self._path("seasonality.csv"))

    def tie_diagnostics(self, rows: list[TieDiscrepancy]) -> Path:
        frame = pd.DataFrame(
            [
                {
                    "group": row.group,
                    "first": row.first,
                    "second": row.second,
                    "common_std": row.common_std,
                    "observed_std": row.observed_std,
                    "ratio": row.ratio,
                }
                for row in rows
            ],
            columns=["group", "first", "second", "common_std", "observed_std", "ratio"],
        )
        return _frame_to_csv(frame, self._path("tie_diagnostics.csv"))
