"""Körtidsmodell för simulatorn.

Grundsanningen är frågans kalla körtid per konfiguration (QuerySpec.true_runtime).
Cacheläget skalar den:

  cold        -> oförändrad
  warm        -> * warm_factor (0 < warm_factor <= 1)
  contention  -> * 1.20

Brus är multiplikativt log-normalt och deterministiskt per (seed, fråga, storlek),
så samma fråga på samma storlek ger alltid samma körtid oavsett körordning.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from elastic_scaler.core.types import QuerySpec

COLD = "cold"
WARM = "warm"
CONTENTION = "contention"
CACHE_MODES = (COLD, WARM, CONTENTION)

CONTENTION_FACTOR = 1.20


def synthetic_runtime(parallel_work: float, serial_overhead: float, c: int) -> float:
    """t(q, c) = a_q / c + b_q."""
    if c < 1:
        raise ValueError(f"antal workers måste vara >= 1: {c}")
    if parallel_work < 0 or serial_overhead < 0:
        raise ValueError("a_q och b_q får inte vara negativa")
    return parallel_work / c + serial_overhead


@dataclass(frozen=True)
class RuntimeModel:
    cache_mode: str = COLD
    warm_factor: float = 0.7
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.cache_mode not in CACHE_MODES:
            raise ValueError(f"okänt cacheläge: {self.cache_mode}")
        if not 0 < self.warm_factor <= 1:
            raise ValueError(f"warm_factor måste ligga i (0, 1]: {self.warm_factor}")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma får inte vara negativ")

    @classmethod
    def from_config(cls, cfg, cache_mode: str | None = None,
                    seed: int | None = None) -> "RuntimeModel":
        sim = cfg.section("simulation")
        return cls(
            cache_mode=cache_mode or sim.get("cache_mode", COLD),
            warm_factor=float(sim.get("warm_factor", 0.7)),
            noise_sigma=float(sim.get("noise_sigma", 0.0)),
            seed=int(sim.get("seed", 0) if seed is None else seed),
        )

    @property
    def mode_factor(self) -> float:
        if self.cache_mode == WARM:
            return self.warm_factor
        if self.cache_mode == CONTENTION:
            return CONTENTION_FACTOR
        return 1.0

    def noise(self, query_id: int, c: int) -> float:
        if self.noise_sigma == 0:
            return 1.0
        rng = np.random.default_rng([self.seed, abs(int(query_id)), int(c)])
        return float(rng.lognormal(0.0, self.noise_sigma))

    def runtime(self, query: QuerySpec, c: int) -> float:
        return query.runtime_at(c) * self.mode_factor * self.noise(query.id, c)
