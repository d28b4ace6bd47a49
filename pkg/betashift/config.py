"""
Runtime settings

Defaults are overridden by BETASHIFT_* environment variables (a .env file is
loaded first), then by an optional ``key = value`` config file, then by
command-line flags.
"""

import logging
import os
from typing import Any, Dict, Optional

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError

load_dotenv()

_ENV_PREFIX = "BETASHIFT_"


class Settings(BaseModel):
    """Precision, search limits and parallelism for one run"""

    bits: int = Field(128, ge=53)
    precision_cap: int = Field(4096, ge=53)
    max_len: int = Field(512, ge=2)
    max_cut: int = Field(2000, ge=3)
    workers: int = Field(1, ge=1)
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {value!r}")
        return level

    @model_validator(mode="after")
    def _cap_above_start(self) -> "Settings":
        if self.precision_cap < self.bits:
            raise ValueError("precision_cap must be at least bits")
        return self


def _normalize(key: str) -> str:
    return key.strip().lower().lstrip("-").replace("-", "_")


def _from_environment() -> Dict[str, Any]:
    values = {}
    for name in Settings.model_fields:
        raw = os.getenv(_ENV_PREFIX + name.upper())
        if raw is not None and raw != "":
            values[name] = raw
    return values


def _from_file(path: str) -> Dict[str, Any]:
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    values = {}
    for key, raw in dotenv_values(path).items():
        name = _normalize(key)
        if name not in Settings.model_fields:
            raise ConfigError(f"unknown config key {key!r} in {path}")
        if raw is not None:
            values[name] = raw
    return values


def load_settings(config_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> Settings:
    """Merge defaults, environment, config file and explicit overrides, in that order"""
    merged: Dict[str, Any] = {}
    merged.update(_from_environment())
    if config_path:
        merged.update(_from_file(config_path))
    if overrides:
        merged.update({_normalize(k): v for k, v in overrides.items() if v is not None})
    try:
        return Settings(**merged)
    except ValidationError as e:
        raise ConfigError(f"invalid settings: {e.errors()[0]['msg']} ({e.errors()[0]['loc']})") from e
