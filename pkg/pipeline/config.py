"""
Run-level configuration.

A :class:`RunConfig` is read from a flat INI file with the sections
``[input]``, ``[model]``, ``[algorithm]``, ``[emit]`` and ``[ties]``; CLI
flags carry the same field names and override file values. The only
environment override is ``OUTPUT_DIR`` (see :class:`utils.config.Settings`).

Example::

    [input]
    panel = data/panel.csv
    metadata = data/metadata.csv

    [model]
    q = 3
    r = 6
    d = 2

    [algorithm]
    em_tol = 1e-6
    smoother = dk_no_inverse

    [emit]
    output_dir = out
    spectra = false

    [ties]
    gdo = gdp, gdi
"""

from __future__ import annotations

import configparser
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from preprocess.types import SeriesMeta
from strategies.factory import SmootherVariant
from utils.config import Settings
from utils.constants import (
    ADF_LEVEL,
    DETREND_THRESHOLD,
    DIFFUSE_SCALE,
    EM_MAX_ITER,
    EM_MIN_ITER,
    EM_TOL,
    I1_FLOOR_FRAC,
    LOGLIK_SLACK,
    TOL_SHARE,
    TREND_KMAX,
)
from utils.exceptions import InvalidSpecError

SECTIONS = ("input", "model", "algorithm", "emit", "ties")

EMIT_FLAGS = (
    "factors",
    "trends",
    "cycles",
    "per_variable",
    "mse_trace",
    "spectra",
    "selection_report",
    "seasonality",
    "tie_diagnostics",
)


class EmitFlags(BaseModel):
    """Which output files a run writes besides the model artifact and the manifest."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    factors: bool = True
    trends: bool = True
    cycles: bool = True
    per_variable: bool = True
    mse_trace: bool = True
    spectra: bool = True
    selection_report: bool = True
    seasonality: bool = True
    tie_diagnostics: bool = True

    def enabled(self) -> list[str]:
        return [name for name in EMIT_FLAGS if getattr(self, name)]


class RunConfig(BaseModel):
    """
    Settings of one pipeline run.

    ``q``, ``r`` and ``d`` fix the corresponding dimension instead of estimating
    it. Tie groups map a group name to the ids of series sharing one loading
    row; metadata ``tie_group`` entries are merged in by the pipeline.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    # [input]
    panel: Path | None = None
    metadata: Path | None = None

    # [model]
    q: int | None = Field(default=None, ge=1)
    r: int | None = Field(default=None, ge=1)
    d: int | None = Field(default=None, ge=1)
    q_max: int = Field(default=10, ge=1)
    r_max: int = Field(default=20, ge=1)
    trend_kmax: int = Field(default=TREND_KMAX, ge=0)
    tol_share: float = Field(default=TOL_SHARE, gt=0, lt=100)
    adf_level: float = Field(default=ADF_LEVEL, gt=0, lt=1)
    bandwidth: int | None = Field(default=None, ge=1)
    detrend_threshold: float = Field(default=DETREND_THRESHOLD, gt=0)
    long_run: Literal["bartlett", "literal"] = "bartlett"
    demean: bool = True

    # [algorithm]
    diffuse_scale: float = Field(default=DIFFUSE_SCALE, gt=0)
    em_tol: float = Field(default=EM_TOL, gt=0)
    em_max_iter: int = Field(default=EM_MAX_ITER, ge=1)
    em_min_iter: int = Field(default=EM_MIN_ITER, ge=1)
    i1_floor_frac: float = Field(default=I1_FLOOR_FRAC, gt=0)
    loglik_slack: float = Field(default=LOGLIK_SLACK, ge=0)
    smoother: SmootherVariant = SmootherVariant.DK_NO_INVERSE
    seed: int = 0

    # [emit]
    output_dir: Path = Path("output")
    emit: EmitFlags = Field(default_factory=EmitFlags)

    # [ties]
    ties: dict[str, list[str]] = Field(default_factory=dict)

    @field_validator("smoother", mode="before")
    @classmethod
    def parse_smoother(cls, v: Any) -> SmootherVariant:
        if isinstance(v, SmootherVariant):
            return v
        return SmootherVariant.from_string(str(v))

    @field_validator("ties")
    @classmethod
    def validate_ties(cls, v: dict[str, list[str]]) -> dict[str, list[str]]:
        for name, members in v.items():
            if len(members) < 2:
                raise ValueError(f"tie group {name!r} needs at least two series")
            if len(set(members)) != len(members):
                raise ValueError(f"tie group {name!r} lists a series twice")
        return v

    @model_validator(mode="after")
    def check_dimensions(self) -> RunConfig:
        if self.em_min_iter > self.em_max_iter:
            raise ValueError("em_min_iter must not exceed em_max_iter")
        if self.q is not None and self.r is not None and self.q > self.r:
            raise ValueError(f"q={self.q} must not exceed r={self.r}")
        if self.q is not None and self.d is not None and self.d >= self.q:
            raise ValueError(f"d={self.d} must be below q={self.q}")
        return self

    @property
    def resolved_output_dir(self) -> Path:
        """``OUTPUT_DIR`` from the environment when set, else ``output_dir``."""
        override = Settings.OUTPUT_DIR
        return Path(override) if override else self.output_dir

    def tie_groups(self, metas: tuple[SeriesMeta, ...] | list[SeriesMeta]) -> dict[str, list[int]]:
        """
        Row indices of every tie group, from the config and from metadata.

        :raises InvalidSpecError: If a group names a series absent from the panel
            or a series belongs to two groups
        """
        index = {meta.id: i for i, meta in enumerate(metas)}
        groups: dict[str, list[int]] = {}
        for name, members in self.ties.items():
            unknown = [m for m in members if m not in index]
            if unknown:
                raise InvalidSpecError(
                    f"tie group {name!r} references unknown series: {', '.join(unknown)}",
                    field="ties",
                )
            groups[name] = [index[m] for m in members]
        for meta in metas:
            if meta.tie_group and meta.tie_group not in self.ties:
                groups.setdefault(meta.tie_group, []).append(index[meta.id])
        groups = {name: rows for name, rows in groups.items() if len(rows) > 1}

        seen: dict[int, str] = {}
        for name, rows in groups.items():
            for row in rows:
                if row in seen:
                    raise InvalidSpecError(
                        f"series {metas[row].id!r} is in tie groups {seen[row]!r} and {name!r}",
                        field="ties",
                    )
                seen[row] = name
        return groups

    @classmethod
    def from_ini(cls, path: Path | str, **overrides: Any) -> RunConfig:
        """
        Load an INI file; keyword arguments that are not None override file values.

        :raises ValueError: On an unknown section or key
        :raises pydantic.ValidationError: On invalid values
        """
        parser = configparser.ConfigParser(interpolation=None)
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
        data = cls._from_parser(parser)
        return cls._merge(data, overrides)

    @classmethod
    def from_overrides(cls, **overrides: Any) -> RunConfig:
        """Build a config from CLI values alone."""
        return cls._merge({}, overrides)

    @classmethod
    def _from_parser(cls, parser: configparser.ConfigParser) -> dict[str, Any]:
        unknown = [s for s in parser.sections() if s not in SECTIONS]
        if unknown:
            raise ValueError(f"unknown config sections: {', '.join(unknown)}")
        data: dict[str, Any] = {}
        emit: dict[str, Any] = {}
        for section in parser.sections():
            for key, raw in parser.items(section):
                value = raw.strip()
                if section == "ties":
                    data.setdefault("ties", {})[key] = [
                        m.strip() for m in value.split(",") if m.strip()
                    ]
                elif section == "emit" and key in EMIT_FLAGS:
                    emit[key] = parser.getboolean(section, key)
                elif key in cls.model_fields and key not in ("emit", "ties"):
                    data[key] = value if value != "" else None
                else:
                    raise ValueError(f"unknown key {key!r} in section [{section}]")
        if emit:
            data["emit"] = emit
        return data

    @classmethod
    def _merge(cls, data: dict[str, Any], overrides: dict[str, Any]) -> RunConfig:
        data = dict(data)
        emit = dict(data.get("emit", {}))
        for key, value in overrides.items():
            if value is None:
                continue
            if key in EMIT_FLAGS:
                emit[key] = value
            elif key == "ties":
                data["ties"] = {**data.get("ties", {}), **value}
            else:
                data[key] = value
        if emit:
            data["emit"] = emit
        return cls.model_validate(data)

    def summary(self) -> dict[str, str]:
        """Flat view for console tables and the run manifest."""
        flat = self.model_dump(mode="json", exclude={"emit", "ties"})
        out = {key: "auto" if value is None else str(value) for key, value in flat.items()}
        out["output_dir"] = str(self.resolved_output_dir)
        out["emit"] = ", ".join(self.emit.enabled()) or "none"
        out["ties"] = "; ".join(f"{k}={','.join(v)}" for k, v in self.ties.items()) or "none"
        return out
