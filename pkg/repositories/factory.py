"""
Repository factory.

Creates panel and artifact repositories by storage type, so the pipeline and
the CLI never instantiate a concrete repository themselves.
"""

from __future__ import annotations

from enum import Enum
from pathlib import Path

from repositories.artifact_repository import CsvArtifactRepository
from repositories.base import ArtifactRepository, PanelRepository
from repositories.csv_repository import CsvPanelRepository
from utils.logging_interfaces import LoggerProtocol


class RepositoryType(str, Enum):
    """Available storage backends."""

    CSV = "csv"

    @classmethod
    def from_string(cls, value: str) -> RepositoryType:
        """
        :raises ValueError: If the value is not a known storage type
        """
        try:
            return cls(value.lower())
        except ValueError:
            valid = [t.value for t in cls]
            raise ValueError(
                f"Invalid repository type: {value}. Valid types are: {valid}"
            ) from None


class RepositoryFactory:
    """Builds repositories for a storage type."""

    @staticmethod
    def create_panel_repository(
        repository_type: RepositoryType | str = RepositoryType.CSV,
        *,
        logger: LoggerProtocol | None = None,
    ) -> PanelRepository:
        if isinstance(repository_type, str):
            repository_type = RepositoryType.from_string(repository_type)
        if repository_type is RepositoryType.CSV:
            return CsvPanelRepository(logger=logger)
        raise ValueError(f"Unsupported repository type: {repository_type}")

    @staticmethod
    def create_artifact_repository(
        root: Path | str,
        repository_type: RepositoryType | str = RepositoryType.CSV,
        *,
        logger: LoggerProtocol | None = None,
    ) -> ArtifactRepository:
        """
        :param root: Run directory holding the ``model/`` artifact
        """
        if isinstance(repository_type, str):
            repository_type = RepositoryType.from_string(repository_type)
        if repository_type is RepositoryType.CSV:
            return CsvArtifactRepository(root, logger=logger)
        raise ValueError(f"Unsupported repository type: {repository_type}")
