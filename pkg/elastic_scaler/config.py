"""Konfiguration för simuleringen.

config.yaml är indelad i sektioner (simulation, pricing, placement, policies,
workloads, bench, oml_tuning, ...). Moduler läser sin egen sektion via
Config.section(); miljövariablerna DATABASE_URL, PERF_SIM_THREADS och LOG_LEVEL
vinner över filen.
"""
from __future__ import annotations

import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any

import yaml

from elastic_scaler.errors import ConfigurationError

REPO_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG_PATH = REPO_ROOT / "config.yaml"


@dataclass(frozen=True)
class Config:
    data: Mapping[str, Any] = field(default_factory=dict)

    def section(self, name: str) -> dict[str, Any]:
        """Sektionen som dict; saknad eller tom sektion ger {}."""
        value = self.data.get(name) or {}
        if not isinstance(value, Mapping):
            raise ConfigurationError(f"sektionen '{name}' måste vara en mappning")
        return dict(value)

    def policy(self, name: str) -> dict[str, Any]:
        """Parametrar för en policy under policies.<name>."""
        value = self.section("policies").get(name) or {}
        if not isinstance(value, Mapping):
            raise ConfigurationError(f"policies.{name} måste vara en mappning")
        return dict(value)

    @property
    def database_url(self) -> str:
        url = os.getenv("DATABASE_URL") or self.section("database").get("url")
        if not url:
            raise ConfigurationError("database.url saknas (och DATABASE_URL är inte satt)")
        return str(url)

    @property
    def sim_threads(self) -> int:
        """Tak för parallellism i bench. PERF_SIM_THREADS vinner över bench.threads."""
        raw = os.getenv("PERF_SIM_THREADS") or self.section("bench").get("threads", 1)
        try:
            return max(1, int(raw))
        except (TypeError, ValueError):
            return 1

    @property
    def log_level(self) -> str:
        return str(os.getenv("LOG_LEVEL") or self.section("logging").get("level", "INFO")).upper()


@lru_cache(maxsize=None)
def load_config(path: str | os.PathLike[str] | None = None) -> Config:
    cfg_path = Path(path) if path else DEFAULT_CONFIG_PATH
    try:
        with open(cfg_path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ConfigurationError(f"kan inte läsa {cfg_path}: {exc}") from exc
    if not isinstance(data, Mapping):
        raise ConfigurationError(f"{cfg_path} måste innehålla en mappning på toppnivå")
    return Config(data)


def load_params(path: str | os.PathLike[str]) -> dict[str, Any]:
    """Läs en platt parameterfil (k_p, k_i, w, alpha, beta, eta, seed …)."""
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ValueError(f"Parameterfilen {path} måste vara en platt nyckel/värde-fil")
    nested = [k for k, v in data.items() if isinstance(v, (dict, list))]
    if nested:
        raise ValueError(f"Parameterfilen {path} är inte platt: {', '.join(nested)}")
    return data
