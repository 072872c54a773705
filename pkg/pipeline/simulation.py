"""
Synthetic panels written in the same CSV format the pipeline reads.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from preprocess.types import PanelData, SeriesMeta
from repositories.artifact_repository import quarter_labels, write_matrix
from repositories.base import PanelRepository
from simulate.dgp import DGPConfig, GroundTruth, gen_dfm
from utils.logging_interfaces import LoggerProtocol

DEFAULT_START = "1960Q1"


@dataclass(frozen=True)
class SimulatedPanel:
    panel: PanelData
    truth: GroundTruth
    files: tuple[str, ...]


def simulated_ids(n: int) -> tuple[str, ...]:
    width = len(str(n))
    return tuple(f"x{i + 1:0{width}d}" for i in range(n))


def write_simulation(
    cfg: DGPConfig,
    output_dir: Path | str,
    repository: PanelRepository,
    *,
    start: str = DEFAULT_START,
    logger: LoggerProtocol | None = None,
) -> SimulatedPanel:
    """
    Draw a panel and write ``panel.csv``, ``metadata.csv`` and ``truth/*.csv``.

    :param cfg: Data-generating process
    :param output_dir: Target directory
    :param repository: Panel sink
    :param start: First quarter of the sample
    """
    if logger is None:
        from utils.logger import log as logger

    out = Path(output_dir)
    X, truth = gen_dfm(cfg)
    ids = simulated_ids(cfg.n)
    dates = pd.period_range(start=start, periods=cfg.T, freq="Q")
    metas = tuple(SeriesMeta(id=i) for i in ids)
    panel = PanelData(values=X, ids=ids, dates=dates, metas=metas)

    files = ["panel.csv", "metadata.csv"]
    repository.write_panel(panel, out / "panel.csv")
    repository.write_metadata(list(metas), out / "metadata.csv")

    truth_dir = out / "truth"
    truth_dir.mkdir(parents=True, exist_ok=True)
    labels = quarter_labels(dates)
    for name, block, prefix in (
        ("factors", truth.F, "F"),
        ("trends", truth.tau, "trend"),
        ("cycles", truth.gamma, "gamma"),
    ):
        write_matrix(
            truth_dir / f"{name}.csv",
            block.T,
            columns=[f"{prefix}{j + 1}" for j in range(block.shape[0])],
            index=labels,
            index_label="date",
        )
        files.append(f"truth/{name}.csv")
    for name, block in (
        ("common", truth.chi),
        ("common_trend", truth.chi_trend),
        ("common_cycle", truth.chi_cycle),
        ("common_residual_cycle", truth.chi_residual),
        ("idiosyncratic", truth.xi),
    ):
        write_matrix(
            truth_dir / f"{name}.csv", block.T, columns=list(ids), index=labels, index_label="date"
        )
        files.append(f"truth/{name}.csv")
    write_matrix(
        truth_dir / "loadings.csv",
        truth.Lambda,
        columns=[f"F{j + 1}" for j in range(cfg.r)],
        index=list(ids),
    )
    pd.DataFrame({"id": ids, "rho": truth.rho.astype(int)}).to_csv(
        truth_dir / "rho.csv", index=False, lineterminator="\n"
    )
    files += ["truth/loadings.csv", "truth/rho.csv"]

    logger.info(
        f"Simulated n={cfg.n} T={cfg.T} q={cfg.q} d={cfg.d} r={cfg.r} (seed {cfg.seed}) into {out}"
    )
    return SimulatedPanel(panel=panel, truth=truth, files=tuple(files))


def truth_summary(truth: GroundTruth) -> dict[str, str]:
    """Scalar summary of a draw for console tables."""
    dchi = np.diff(truth.chi, axis=1)
    dx = dchi + np.diff(truth.xi, axis=1)
    share = float(np.var(dchi) / np.var(dx)) if np.var(dx) > 0 else float("nan")
    return {
        "common share of var(dx)": f"{share:.3f}",
        "I(1) idiosyncratic series": str(int(truth.rho.sum())),
    }
