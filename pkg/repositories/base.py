"""
Base repository interfaces.

Repositories hide where panels and fitted models are stored, so the pipeline
works against these contracts and tests can substitute in-memory doubles.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from preprocess.detrend import DetrendResult
from preprocess.types import PanelData, SeriesMeta
from utils.exceptions import FactorModelError
from utils.model import ModelSpec, Params


@dataclass(frozen=True)
class FittedModel:
    """
    Everything needed to decompose or report on a fit without re-estimating it.

    :ivar ids: Series identifiers, in row order
    :ivar dates: Quarterly dates of the estimation sample
    :ivar spec: Dimensions and algorithm settings of the fit
    :ivar params: Estimated Θ
    :ivar X: n×T preprocessed panel the model was fitted on
    :ivar Y: n×T transformed series before detrending
    :ivar detrend: Deterministic component of every series
    :ivar factors: r×T smoothed static factors
    :ivar loglik: Log-likelihood at ``params``
    :ivar ties: Tie groups as ``{name: [series ids]}``
    """

    ids: tuple[str, ...]
    dates: pd.PeriodIndex
    spec: ModelSpec
    params: Params
    X: np.ndarray
    Y: np.ndarray
    detrend: tuple[DetrendResult, ...]
    factors: np.ndarray
    loglik: float
    ties: dict[str, list[str]] = field(default_factory=dict)


class PanelRepository(ABC):
    """Source and sink of observed panels."""

    @abstractmethod
    def read_panel(self, source: Path | str, metadata: Path | str | None = None) -> PanelData:
        """
        Load a panel and its per-series metadata.

        :param source: Location of the observations
        :param metadata: Location of the metadata; defaults for every series when omitted
        :raises PanelFormatError: If the observations are malformed
        """

    @abstractmethod
    def read_metadata(self, source: Path | str) -> list[SeriesMeta]:
        """Load per-series metadata."""

    @abstractmethod
    def write_panel(self, panel: PanelData, destination: Path | str) -> Path:
        """Persist the observations of a panel; returns the written location."""

    @abstractmethod
    def write_metadata(self, metas: list[SeriesMeta], destination: Path | str) -> Path:
        """Persist per-series metadata; returns the written location."""


class ArtifactRepository(ABC):
    """Persistent store of fitted models."""

    @abstractmethod
    def save(self, model: FittedModel) -> Path:
        """Persist a fitted model; returns the artifact location."""

    @abstractmethod
    def load(self) -> FittedModel:
        """
        Load the stored fitted model.

        :raises ArtifactNotFoundError: If nothing has been stored
        """

    @abstractmethod
    def exists(self) -> bool:
        """Whether a fitted model is stored."""


class ArtifactNotFoundError(FactorModelError):
    """Raised when a fitted-model artifact is missing or incomplete."""

    def __init__(self, location: Path | str, missing: str | None = None):
        self.location = Path(location)
        self.missing = missing
        detail = f" (missing {missing})" if missing else ""
        super().__init__(f"No fitted model at {self.location}{detail}", field=missing)
