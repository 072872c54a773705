"""
Fitted-model artifacts stored as a directory of flat CSV matrices.

Layout under ``<root>/model``::

    spec.json            dimensions, algorithm settings and log-likelihood
    loadings.csv         Λ, one row per series
    A1.csv, A2.csv       VAR(2) matrices
    H.csv                shock loading
    idiosyncratic.csv    R, rho and the variance floor per series
    factors.csv          smoothed static factors, one row per quarter
    panel_X.csv          preprocessed panel
    panel_Y.csv          transformed series before detrending
    detrend.csv          deterministic component per series
    ties.csv             tie-group membership, one row per tied series

Numbers are written with 15 significant digits.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from preprocess.detrend import DetrendResult
from repositories.base import ArtifactNotFoundError, ArtifactRepository, FittedModel
from utils.constants import DeterministicKind
from utils.formatters import NUMBER_FORMAT
from utils.logging_interfaces import LoggerProtocol
from utils.model import ModelSpec, Params

MODEL_DIR = "model"
_FILES = (
    "spec.json",
    "loadings.csv",
    "A1.csv",
    "A2.csv",
    "H.csv",
    "idiosyncratic.csv",
    "factors.csv",
    "panel_X.csv",
    "panel_Y.csv",
    "detrend.csv",
    "ties.csv",
)


class SpecRecord(BaseModel):
    """JSON form of :class:`ModelSpec` plus the fit's log-likelihood."""

    model_config = ConfigDict(frozen=True)

    n: int
    T: int
    r: int
    q: int
    d: int | None = None
    var_order: int
    diffuse_scale: float
    em_tol: float
    em_max_iter: int
    em_min_iter: int
    i1_floor_frac: float
    loglik_slack: float
    loglik: float

    @classmethod
    def from_spec(cls, spec: ModelSpec, loglik: float) -> SpecRecord:
        return cls(
            n=spec.n,
            T=spec.T,
            r=spec.r,
            q=spec.q,
            d=spec.d,
            var_order=spec.var_order,
            diffuse_scale=spec.diffuse_scale,
            em_tol=spec.em_tol,
            em_max_iter=spec.em_max_iter,
            em_min_iter=spec.em_min_iter,
            i1_floor_frac=spec.i1_floor_frac,
            loglik_slack=spec.loglik_slack,
            loglik=loglik,
        )

    def to_spec(self) -> ModelSpec:
        return ModelSpec(**self.model_dump(exclude={"loglik"}))


def quarter_labels(dates: pd.PeriodIndex) -> list[str]:
    return [f"{p.year}Q{p.quarter}" for p in dates]


def write_matrix(
    path: Path,
    matrix: np.ndarray,
    *,
    columns: list[str],
    index: list[str] | None = None,
    index_label: str | None = None,
) -> Path:
    """Write a 2-D array as CSV at 15 significant digits."""
    frame = pd.DataFrame(np.atleast_2d(matrix), columns=columns)
    if index is not None:
        frame.insert(0, index_label or "id", index)
    frame.to_csv(path, index=False, float_format=NUMBER_FORMAT, lineterminator="\n")
    return path


def read_matrix(path: Path, *, has_index: bool = False) -> tuple[np.ndarray, list[str]]:
    """Read a CSV written by :func:`write_matrix`; returns (values, index labels)."""
    frame = pd.read_csv(path, float_precision="round_trip")
    if has_index:
        labels = frame.iloc[:, 0].astype(str).tolist()
        return frame.iloc[:, 1:].to_numpy(dtype=float), labels
    return frame.to_numpy(dtype=float), []


class CsvArtifactRepository(ArtifactRepository):
    """
    Stores one fitted model under ``<root>/model``.

    :ivar root: Run directory
    """

    def __init__(self, root: Path | str, *, logger: LoggerProtocol | None = None):
        if logger is None:
            from utils.logger import log as logger
        self.root = Path(root)
        self._logger = logger

    @property
    def model_dir(self) -> Path:
        return self.root / MODEL_DIR

    def exists(self) -> bool:
        return all((self.model_dir / name).is_file() for name in _FILES)

    def save(self, model: FittedModel) -> Path:
        out = self.model_dir
        out.mkdir(parents=True, exist_ok=True)
        ids = list(model.ids)
        dates = quarter_labels(model.dates)
        p = model.params
        factor_cols = [f"F{j + 1}" for j in range(p.r)]

        record = SpecRecord.from_spec(model.spec, model.loglik)
        (out / "spec.json").write_text(record.model_dump_json(indent=2) + "\n", encoding="utf-8")
        write_matrix(out / "loadings.csv", p.Lambda, columns=factor_cols, index=ids)
        write_matrix(out / "A1.csv", p.A1, columns=factor_cols)
        write_matrix(out / "A2.csv", p.A2, columns=factor_cols)
        write_matrix(out / "H.csv", p.H, columns=[f"u{j + 1}" for j in range(p.q)])
        idio = pd.DataFrame({"id": ids, "R": p.R, "rho": p.rho.astype(int), "floor": p.floor})
        idio.to_csv(
            out / "idiosyncratic.csv", index=False, float_format=NUMBER_FORMAT, lineterminator="\n"
        )
        write_matrix(
            out / "factors.csv",
            model.factors.T,
            columns=factor_cols,
            index=dates,
            index_label="date",
        )
        write_matrix(out / "panel_X.csv", model.X.T, columns=ids, index=dates, index_label="date")
        write_matrix(out / "panel_Y.csv", model.Y.T, columns=ids, index=dates, index_label="date")
        detrend = pd.DataFrame(
            {
                "id": ids,
                "mode": [res.mode_used.value for res in model.detrend],
                "a_hat": [res.a_hat for res in model.detrend],
                "b_hat": [res.b_hat for res in model.detrend],
                "statistic": [res.statistic for res in model.detrend],
                "offset": [res.offset for res in model.detrend],
                "drift_removed": [int(res.drift_removed) for res in model.detrend],
                "fell_back": [int(res.fell_back) for res in model.detrend],
            }
        )
        detrend.to_csv(
            out / "detrend.csv", index=False, float_format=NUMBER_FORMAT, lineterminator="\n"
        )
        ties = pd.DataFrame(
            [(name, member) for name, members in model.ties.items() for member in members],
            columns=["group", "id"],
        )
        ties.to_csv(out / "ties.csv", index=False, lineterminator="\n")
        self._logger.info(f"Saved fitted model to {out}")
        return out

    def load(self) -> FittedModel:
        out = self.model_dir
        for name in _FILES:
            if not (out / name).is_file():
                raise ArtifactNotFoundError(out, name)

        record = SpecRecord.model_validate_json((out / "spec.json").read_text(encoding="utf-8"))
        Lambda, ids = read_matrix(out / "loadings.csv", has_index=True)
        A1, _ = read_matrix(out / "A1.csv")
        A2, _ = read_matrix(out / "A2.csv")
        H, _ = read_matrix(out / "H.csv")
        idio = pd.read_csv(out / "idiosyncratic.csv", float_precision="round_trip")
        factors, dates = read_matrix(out / "factors.csv", has_index=True)
        X, _ = read_matrix(out / "panel_X.csv", has_index=True)
        Y, _ = read_matrix(out / "panel_Y.csv", has_index=True)
        table = pd.read_csv(out / "detrend.csv", float_precision="round_trip")
        tie_rows = pd.read_csv(out / "ties.csv", dtype=str, keep_default_na=False)
        ties: dict[str, list[str]] = {}
        for group, member in tie_rows.itertuples(index=False):
            ties.setdefault(group, []).append(member)

        params = Params(
            Lambda=Lambda,
            A1=A1,
            A2=A2,
            H=H,
            R=idio["R"].to_numpy(dtype=float),
            rho=idio["rho"].to_numpy(dtype=int),
            floor=idio["floor"].to_numpy(dtype=float),
        )
        detrend = tuple(
            DetrendResult(
                a_hat=float(row.a_hat),
                b_hat=float(row.b_hat),
                mode_used=DeterministicKind(row.mode),
                statistic=float(row.statistic),
                offset=float(row.offset),
                drift_removed=bool(row.drift_removed),
                fell_back=bool(row.fell_back),
            )
            for row in table.itertuples(index=False)
        )
        self._logger.debug(f"Loaded fitted model from {out}")
        return FittedModel(
            ids=tuple(ids),
            dates=pd.PeriodIndex(dates, freq="Q"),
            spec=record.to_spec(),
            params=params,
            X=X.T,
            Y=Y.T,
            detrend=detrend,
            factors=factors.T,
            loglik=record.loglik,
            ties=ties,
        )
