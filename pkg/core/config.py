from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional

import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = "config/default.yaml"


@dataclass
class Config:
    """Container object wrapping nested configuration dictionaries."""

    raw: Dict[str, Any]

    def section(self, name: str, default: Any = None) -> Any:
        value = self.raw.get(name)
        return default if value is None else value

    def __getitem__(self, item: str) -> Any:
        return self.raw[item]


@dataclass(frozen=True)
class Limits:
    max_steps: int = 200_000
    max_subsets: int = 20
    max_stages: Optional[int] = None
    max_prop_vars: int = 20

    def __post_init__(self) -> None:
        for name in ("max_steps", "max_subsets", "max_prop_vars"):
            if getattr(self, name) < 0:
                raise ValueError(f"Limit {name} must be non-negative")
        if self.max_stages is not None and self.max_stages <= 0:
            raise ValueError("Limit max_stages must be positive")

    def override(self, **changes: Optional[int]) -> "Limits":
        kept = {key: value for key, value in changes.items() if value is not None}
        return replace(self, **kept) if kept else self


@dataclass(frozen=True)
class WorkbenchSettings:
    semiring: str = "nat"
    semiring_params: Dict[str, Any] = field(default_factory=dict)
    limits: Limits = field(default_factory=Limits)
    threads: int = 1
    so_mode: str = "arity"
    log_level: str = "INFO"
    reporting: Dict[str, Any] = field(default_factory=dict)


def _expand_env(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _expand_env(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_expand_env(v) for v in value]
    if isinstance(value, str):
        return os.path.expandvars(value)
    return value


def load_config(path: str) -> Config:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Config file not found: {path}")

    with open(path, "r", encoding="utf-8") as handle:
        data = yaml.safe_load(handle) or {}

    expanded = _expand_env(data)
    return Config(expanded)


def _as_threads(value: Any) -> int:
    # an unexpanded ${WDC_THREADS} or an empty string means "not set"
    try:
        threads = int(value)
    except (TypeError, ValueError):
        return 1
    return max(threads, 1)


def build_settings(config: Optional[Config] = None) -> WorkbenchSettings:
    if config is None:
        config = Config({})

    semiring_cfg = config.section("semiring", {})
    limits_cfg = config.section("limits", {})
    logic_cfg = config.section("logic", {})
    logging_cfg = config.section("logging", {})

    limits = Limits(
        max_steps=int(limits_cfg.get("max_steps", Limits.max_steps)),
        max_subsets=int(limits_cfg.get("max_subsets", Limits.max_subsets)),
        max_stages=limits_cfg.get("max_stages"),
        max_prop_vars=int(limits_cfg.get("max_prop_vars", Limits.max_prop_vars)),
    )
    threads = _as_threads(config.section("threads", os.environ.get("WDC_THREADS")))
    so_mode = str(logic_cfg.get("so_mode", "arity"))
    if so_mode not in ("arity", "monadic"):
        raise ValueError(f"Unknown logic.so_mode: {so_mode}")

    settings = WorkbenchSettings(
        semiring=str(semiring_cfg.get("name", "nat")),
        semiring_params=dict(semiring_cfg.get("params") or {}),
        limits=limits,
        threads=threads,
        so_mode=so_mode,
        log_level=str(logging_cfg.get("level", "INFO")).upper(),
        reporting=dict(config.section("reporting", {})),
    )
    logger.debug(
        "Settings loaded | semiring=%s | threads=%s | limits=%s",
        settings.semiring,
        settings.threads,
        settings.limits,
    )
    return settings


def load_settings(path: Optional[str] = None) -> WorkbenchSettings:
    if path is None:
        if not os.path.exists(DEFAULT_CONFIG_PATH):
            return build_settings()
        path = DEFAULT_CONFIG_PATH
    return build_settings(load_config(path))


__all__ = [
    "Config",
    "DEFAULT_CONFIG_PATH",
    "Limits",
    "WorkbenchSettings",
    "build_settings",
    "load_config",
    "load_settings",
]
