"""
Machine-readable record of a run: resolved settings, versions and stage outcomes.
"""

from __future__ import annotations

import json
import platform
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, Field

MANIFEST_FILE = "manifest.json"
PACKAGE_NAME = "trend-cycle-dfm"
StageStatus = Literal["ok", "failed", "skipped"]
_TRACKED = (PACKAGE_NAME, "numpy", "scipy", "pandas", "statsmodels", "pydantic")


def package_versions() -> dict[str, str]:
    versions = {"python": platform.python_version()}
    for name in _TRACKED:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


class StageRecord(BaseModel):
    """Outcome of one pipeline stage."""

    name: str
    status: StageStatus
    exit_code: int = 0
    message: str | None = None


class RunManifest(BaseModel):
    """
    Everything needed to reproduce a run.

    Only ``timestamp`` differs between two runs with identical inputs.
    """

    command: str
    timestamp: str = Field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )
    seed: int
    settings: dict[str, Any]
    versions: dict[str, str] = Field(default_factory=package_versions)
    stages: list[StageRecord] = Field(default_factory=list)
    selection: dict[str, Any] = Field(default_factory=dict)
    estimation: dict[str, Any] = Field(default_factory=dict)
    outputs: list[str] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)
    exit_code: int = 0

    def record(
        self, name: str, status: StageStatus, exit_code: int = 0, message: str | None = None
    ) -> None:
        self.stages.append(
            StageRecord(name=name, status=status, exit_code=exit_code, message=message)
        )

    def write(self, directory: Path | str) -> Path:
        path = Path(directory) / MANIFEST_FILE
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = self.model_dump(mode="json")
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path

    @classmethod
    def read(cls, directory: Path | str) -> RunManifest:
        path = Path(directory) / MANIFEST_FILE
        return cls.model_validate_json(path.read_text(encoding="utf-8"))
