"""
Storage of observed panels and fitted-model artifacts.
"""

from repositories.base import (
    ArtifactNotFoundError,
    ArtifactRepository,
    FittedModel,
    PanelRepository,
)
from repositories.csv_repository import CsvPanelRepository, parse_dates
from repositories.artifact_repository import (
    CsvArtifactRepository,
    SpecRecord,
    quarter_labels,
    read_matrix,
    write_matrix,
)
from repositories.factory import RepositoryFactory, RepositoryType

__all__ = [
    # Interfaces
    "PanelRepository",
    "ArtifactRepository",
    "ArtifactNotFoundError",
    "FittedModel",
    # Implementations
    "CsvPanelRepository",
    "CsvArtifactRepository",
    "SpecRecord",
    "parse_dates",
    "quarter_labels",
    "read_matrix",
    "write_matrix",
    # Factory
    "RepositoryFactory",
    "RepositoryType",
]
