"""
Configuration module using Pydantic Settings.

Process-level settings (logging sinks, output-directory override) are loaded
from environment variables and an optional ``.env`` file. The Singleton
pattern keeps a single configuration instance for the lifetime of a run.
Run-level model settings live in :mod:`pipeline.config`.
"""

from collections.abc import Callable
from pathlib import Path
from typing import ClassVar, Literal

from pydantic import Field, field_validator
from pydantic._internal._model_construction import ModelMetaclass
from pydantic_settings import BaseSettings, SettingsConfigDict


ROTATION_UNITS = frozenset({"kb", "mb", "gb", "hour", "hours", "day", "days", "week", "weeks"})
RETENTION_UNITS = frozenset({"day", "days", "week", "weeks", "month", "months"})


def _parse_quantity(
    name: str, value: str, units: frozenset[str], number: Callable[[str], float]
) -> tuple[float, str]:
    """
    Split ``"<number> <unit>"`` as loguru expects it for rotation and retention.

    :raises ValueError: On a malformed value, a nonpositive number or an unknown unit
    """
    parts = value.split()
    if len(parts) != 2:
        raise ValueError(f"{name} must look like '<number> <unit>', got {value!r}")
    amount, unit = parts
    try:
        size = number(amount)
    except ValueError:
        raise ValueError(f"{name}: {amount!r} is not a number") from None
    if size <= 0:
        raise ValueError(f"{name} must be positive, got {amount}")
    if unit.lower() not in units:
        raise ValueError(f"{name}: unknown unit {unit!r}, expected one of {sorted(units)}")
    return size, unit.lower()


class SingletonSettingsMeta(ModelMetaclass):
    """
    Metaclass implementing the Singleton pattern with class-level attribute access.

    - Only one instance of each settings class exists.
    - Instance attributes can be read as class attributes (``Settings.LOG_LEVEL``).
    - ``reset()`` drops every instance, which tests use to reload the environment.
    """

    _instances: ClassVar[dict[type, object]] = {}

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            instance = super().__call__(*args, **kwargs)
            cls._instances[cls] = instance
        return cls._instances[cls]

    def __getattribute__(cls, name: str):
        """
        Delegate unknown class attributes to the singleton instance.

        :param name: Attribute name
        :return: Attribute value from singleton instance or class
        """
        try:
            return super().__getattribute__(name)
        except AttributeError:
            pass

        if cls in cls._instances:
            instance = cls._instances[cls]
            if hasattr(instance, name):
                return getattr(instance, name)

        # Settings.ATTR accessed before the first instantiation
        try:
            instance = cls()
            if hasattr(instance, name):
                return getattr(instance, name)
        except Exception:
            pass

        raise AttributeError(f"type object '{cls.__name__}' has no attribute '{name}'")

    @classmethod
    def reset(mcs):
        """Reset all singleton instances."""
        mcs._instances.clear()


class Settings(BaseSettings, metaclass=SingletonSettingsMeta):
    """
    Process configuration with automatic validation.

    Configuration sources (in order of priority):
    1. Environment variables
    2. .env file
    3. Default values

    :cvar LOG_LEVEL: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    :cvar LOG_FILE: Path to the log file
    :cvar LOG_ROTATION: Log file rotation size/time
    :cvar LOG_RETENTION: Log file retention period
    :cvar OUTPUT_DIR: When set, replaces the output directory of every run
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
        validate_default=True,
    )

    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO", description="Logging level"
    )

    LOG_FILE: str = Field(default="logs/dfm.log", description="Path to the log file")

    LOG_ROTATION: str = Field(default="10 MB", description="Log file rotation size or time period")

    LOG_RETENTION: str = Field(default="7 days", description="Log file retention period")

    OUTPUT_DIR: str | None = Field(
        default=None, description="Output directory override applied to every run"
    )

    @field_validator("LOG_FILE")
    @classmethod
    def validate_log_file(cls, v: str) -> str:
        """Create the parent directory of the log file."""
        Path(v).parent.mkdir(parents=True, exist_ok=True)
        return v

    @field_validator("LOG_ROTATION")
    @classmethod
    def validate_log_rotation(cls, v: str) -> str:
        """Accept a size ("10 MB") or an interval ("1 week")."""
        _parse_quantity("LOG_ROTATION", v, ROTATION_UNITS, float)
        return v

    @field_validator("LOG_RETENTION")
    @classmethod
    def validate_log_retention(cls, v: str) -> str:
        """Accept a whole number of days, weeks or months."""
        _parse_quantity("LOG_RETENTION", v, RETENTION_UNITS, int)
        return v

    @field_validator("OUTPUT_DIR")
    @classmethod
    def validate_output_dir(cls, v: str | None) -> str | None:
        """Treat an empty override as unset."""
        if v is not None and not v.strip():
            return None
        return v

    @classmethod
    def get_instance(cls) -> "Settings":
        """Return the Settings singleton."""
        return cls()

    def __repr__(self) -> str:
        return (
            f"Settings("
            f"LOG_LEVEL={self.LOG_LEVEL!r}, "
            f"LOG_FILE={self.LOG_FILE!r}, "
            f"OUTPUT_DIR={self.OUTPUT_DIR!r}"
            f")"
        )
