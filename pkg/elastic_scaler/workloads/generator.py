"""Syntetisk frågegenerator.

Körtidslag (realiserbar för perceptronen):
    a_q = cost_seconds * est_max_cost
    b_q = serial_base_s + est_rows * est_width / serial_bytes_per_s
    t(q, c) = a_q / c + b_q

Egenskaperna dras ur konfigurerbara intervall (log-uniform för kostnad och rader).
t_sla sätts till körtiden vid en målstorlek (ev. med jitter) så att etiketterna styrs.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from elastic_scaler.core.types import ConfigSet, FeatureVector, QuerySpec
from elastic_scaler.policies.oracle import oracle_choose
from elastic_scaler.simenv.runtime import synthetic_runtime

logger = logging.getLogger(__name__)

TAGS = ("micro", "random", "convergence", "no_convergence", "large_only",
        "selective_10pct", "ideal4_heavy", "ideal12_heavy")


@dataclass(frozen=True)
class RuntimeCoefficients:
    cost_seconds: float = 0.004
    serial_base_s: float = 0.5
    serial_bytes_per_s: float = 50_000_000.0

    def __post_init__(self) -> None:
        if self.cost_seconds < 0 or self.serial_base_s < 0:
            raise ValueError("körtidskoefficienter får inte vara negativa")
        if self.serial_bytes_per_s <= 0:
            raise ValueError("serial_bytes_per_s måste vara > 0")

    @classmethod
    def from_dict(cls, d: dict | None) -> "RuntimeCoefficients":
        d = d or {}
        return cls(
            cost_seconds=float(d.get("cost_seconds", 0.004)),
            serial_base_s=float(d.get("serial_base_s", 0.5)),
            serial_bytes_per_s=float(d.get("serial_bytes_per_s", 50_000_000.0)),
        )

    def parallel_work(self, f: FeatureVector) -> float:
        return self.cost_seconds * f.est_max_cost

    def serial_overhead(self, f: FeatureVector) -> float:
        return self.serial_base_s + f.est_rows * f.est_width / self.serial_bytes_per_s

    def runtime(self, f: FeatureVector, c: int) -> float:
        return synthetic_runtime(self.parallel_work(f), self.serial_overhead(f), c)

    def runtimes(self, f: FeatureVector, configs: Iterable[int]) -> dict[int, float]:
        return {c: self.runtime(f, c) for c in configs}


@dataclass(frozen=True)
class FeatureRanges:
    cost: tuple[float, float] = (1_000.0, 100_000.0)     # log-uniform
    rows: tuple[float, float] = (100.0, 1_000_000.0)     # log-uniform
    width: tuple[float, float] = (8.0, 200.0)            # uniform

    @classmethod
    def from_dict(cls, d: dict | None) -> "FeatureRanges":
        d = d or {}
        return cls(
            cost=tuple(float(v) for v in d.get("cost", (1_000.0, 100_000.0))),
            rows=tuple(float(v) for v in d.get("rows", (100.0, 1_000_000.0))),
            width=tuple(float(v) for v in d.get("width", (8.0, 200.0))),
        )


def _log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def sample_features(rng: np.random.Generator, ranges: FeatureRanges = FeatureRanges()) -> FeatureVector:
    return FeatureVector(
        est_max_cost=_log_uniform(rng, *ranges.cost),
        est_rows=_log_uniform(rng, *ranges.rows),
        est_width=float(rng.uniform(*ranges.width)),
    )


def label_ideal_config(query: QuerySpec, configs: ConfigSet | Sequence[int]) -> int:
    """Samma regel som Oracle: storleken med körtid närmast t_sla."""
    sizes = configs.sizes if isinstance(configs, ConfigSet) else tuple(configs)
    return oracle_choose(query, query.t_sla, sizes)


def make_query(query_id: int, features: FeatureVector, coeffs: RuntimeCoefficients,
               configs: Sequence[int], t_sla: float) -> QuerySpec:
    q = QuerySpec(query_id, features, coeffs.runtimes(features, configs), t_sla)
    return QuerySpec(q.id, q.features, q.true_runtime, q.t_sla, label_ideal_config(q, configs))


@dataclass(frozen=True)
class WorkloadSpec:
    name: str
    queries: tuple[QuerySpec, ...]
    seed: int
    tags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "queries", tuple(self.queries))
        unknown = [t for t in self.tags if t not in TAGS]
        if unknown:
            raise ValueError(f"okända taggar: {unknown}")

    def __len__(self) -> int:
        return len(self.queries)

    def covers(self, configs: ConfigSet) -> bool:
        return all(q.covers(configs) for q in self.queries)

    @property
    def labels(self) -> list[int | None]:
        return [q.ideal_config for q in self.queries]


def gen_query_pool(size: int, seed: int, configs: Sequence[int],
                   coeffs: RuntimeCoefficients = RuntimeCoefficients(),
                   ranges: FeatureRanges = FeatureRanges(),
                   target_sizes: Sequence[int] = (2, 4, 6, 8, 10, 12, 16),
                   jitter: float = 0.10) -> list[QuerySpec]:
    """Pool av frågor (ca 900 som default). t_sla = t(målstorlek) * (1 +- jitter)."""
    if size < 1:
        raise ValueError(f"poolstorleken måste vara >= 1: {size}")
    if not 0 <= jitter < 1:
        raise ValueError(f"jitter måste ligga i [0, 1): {jitter}")
    rng = np.random.default_rng(seed)
    pool = []
    for i in range(size):
        f = sample_features(rng, ranges)
        target = int(target_sizes[int(rng.integers(len(target_sizes)))])
        t_sla = coeffs.runtime(f, target) * (1.0 + float(rng.uniform(-jitter, jitter)))
        pool.append(make_query(i, f, coeffs, configs, t_sla))
    logger.info("Frågepool genererad: %d frågor (seed=%s)", size, seed)
    return pool
