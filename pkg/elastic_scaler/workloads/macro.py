"""Slumpade makroarbetslaster ur en gemensam frågepool.

Filter:
  None / "random"    alla frågor
  no_convergence     SLA missas på minsta storleken och ideal != minsta storleken
  large_only         de 30 % dyraste frågorna (est_max_cost)
  selective_10pct    lägsta decilen av utdatavolym (est_rows * est_width)
  convergence        ~70 % av dragningarna bland frågor som klarar SLA på minsta storleken
  ideal4_heavy       ~70 % bland frågor med ideal = minsta storleken
  ideal12_heavy      ~70 % bland frågor med ideal = största storleken
"""
from __future__ import annotations

import logging
from collections.abc import Callable, Sequence

import numpy as np

from elastic_scaler.core.types import QuerySpec
from elastic_scaler.workloads.generator import (
    FeatureRanges,
    RuntimeCoefficients,
    WorkloadSpec,
    gen_query_pool,
)

logger = logging.getLogger(__name__)

DEFAULT_CONFIGS = (4, 6, 8, 10, 12)
HEAVY_WEIGHT = 0.7
LARGE_FRACTION = 0.30
SELECTIVE_FRACTION = 0.10

FILTERS = ("random", "no_convergence", "large_only", "selective_10pct",
           "convergence", "ideal4_heavy", "ideal12_heavy")


def _bytes_out(q: QuerySpec) -> float:
    return q.features.est_rows * q.features.est_width


def _top_fraction(pool: Sequence[QuerySpec], key: Callable[[QuerySpec], float],
                  fraction: float, largest: bool) -> list[QuerySpec]:
    ordered = sorted(pool, key=lambda q: (key(q), q.id), reverse=largest)
    keep = max(1, int(round(fraction * len(ordered))))
    return sorted(ordered[:keep], key=lambda q: q.id)


def _candidates(pool: Sequence[QuerySpec], flt: str | None,
                configs: Sequence[int]) -> tuple[list[QuerySpec], list[bool] | None]:
    """(kandidater, ev. mask för viktad dragning)."""
    lo, hi = min(configs), max(configs)
    if flt in (None, "random"):
        return list(pool), None
    if flt == "no_convergence":
        return [q for q in pool
                if q.runtime_at(lo) > q.t_sla and q.ideal_config != lo], None
    if flt == "large_only":
        return _top_fraction(pool, lambda q: q.features.est_max_cost, LARGE_FRACTION, True), None
    if flt == "selective_10pct":
        return _top_fraction(pool, _bytes_out, SELECTIVE_FRACTION, False), None
    if flt == "convergence":
        return list(pool), [q.runtime_at(lo) <= q.t_sla for q in pool]
    if flt == "ideal4_heavy":
        return list(pool), [q.ideal_config == lo for q in pool]
    if flt == "ideal12_heavy":
        return list(pool), [q.ideal_config == hi for q in pool]
    raise ValueError(f"okänt filter: {flt} (välj bland {', '.join(FILTERS)})")


def _weights(mask: list[bool]) -> np.ndarray:
    pref = sum(mask)
    rest = len(mask) - pref
    if pref == 0 or rest == 0:
        return np.full(len(mask), 1.0 / len(mask))
    return np.array([HEAVY_WEIGHT / pref if m else (1 - HEAVY_WEIGHT) / rest for m in mask])


def gen_random_workload(n: int = 100, seed: int = 0, flt: str | None = None,
                        pool: Sequence[QuerySpec] | None = None, pool_size: int = 900,
                        pool_seed: int = 0, configs: Sequence[int] = DEFAULT_CONFIGS,
                        coeffs: RuntimeCoefficients = RuntimeCoefficients(),
                        ranges: FeatureRanges = FeatureRanges(),
                        name: str | None = None) -> WorkloadSpec:
    if n < 1:
        raise ValueError(f"n måste vara >= 1: {n}")
    if pool is None:
        pool = gen_query_pool(pool_size, pool_seed, configs, coeffs, ranges)
    candidates, mask = _candidates(pool, flt, configs)
    if not candidates:
        raise ValueError(f"filtret {flt} eliminerade alla frågor i poolen")

    rng = np.random.default_rng(seed)
    p = _weights(mask) if mask is not None else None
    nonzero = len(candidates) if p is None else int(np.count_nonzero(p))
    idx = rng.choice(len(candidates), size=n, replace=n > nonzero, p=p)
    queries = tuple(candidates[int(i)] for i in idx)
    tags = ("random",) if flt in (None, "random") else ("random", flt)
    logger.info("Arbetslast %s: %d frågor ur %d kandidater",
                name or flt or "random", n, len(candidates))
    return WorkloadSpec(name or f"random-{flt or 'all'}-{seed}", queries, seed, tags)


SUITE = (
    ("random-1", None), ("random-2", None), ("random-3", None), ("random-4", None),
    ("random-5", None), ("large-1", "large_only"), ("large-2", "large_only"),
    ("selective", "selective_10pct"), ("ideal4-heavy", "ideal4_heavy"),
    ("ideal12-heavy", "ideal12_heavy"),
)


def ten_workload_suite(seed: int = 0, n: int = 100, pool: Sequence[QuerySpec] | None = None,
                       pool_size: int = 900, configs: Sequence[int] = DEFAULT_CONFIGS,
                       coeffs: RuntimeCoefficients = RuntimeCoefficients(),
                       ranges: FeatureRanges = FeatureRanges()) -> list[WorkloadSpec]:
    """Fem slumpade, två med bara stora frågor, en selektiv och två ideal-tunga."""
    if pool is None:
        pool = gen_query_pool(pool_size, seed, configs, coeffs, ranges)
    return [
        gen_random_workload(n, seed + i + 1, flt, pool=pool, configs=configs, name=name)
        for i, (name, flt) in enumerate(SUITE)
    ]
