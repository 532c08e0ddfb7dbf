"""Mikroarbetslaster.

  W1 (konvergenshastighet): block om 10 frågor, ideal 12 / 4 / 12 / 4 / 12 -> 50 frågor.
  W2 (stabilitet):          ideal-12-sekvens med en snabb ideal-4-fråga inuti.
  W3 (spårning):            sågtand av {12,10}-blandningar och {4,6}-blandningar.

Frågorna är parallelldominerade (a/max_c >= 4 b) så att storlekarna skiljs tydligt.
Ideal-12-frågor får t_sla = t(12) / miss_factor: de missar med 5 % även på 12,
vilket håller en reaktiv regulator kvar på 12 under blocket.
"""
from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from elastic_scaler.core.types import FeatureVector, QuerySpec
from elastic_scaler.workloads.generator import (
    FeatureRanges,
    RuntimeCoefficients,
    WorkloadSpec,
    make_query,
    sample_features,
)

logger = logging.getLogger(__name__)

DEFAULT_CONFIGS = (4, 6, 8, 10, 12)
MISS_FACTOR = 1.05
PARALLEL_DOMINANCE = 4.0
_MAX_DRAWS = 10_000


def _parallel_features(rng: np.random.Generator, coeffs: RuntimeCoefficients,
                       ranges: FeatureRanges, max_c: int) -> FeatureVector:
    for _ in range(_MAX_DRAWS):
        f = sample_features(rng, ranges)
        if coeffs.parallel_work(f) / max_c >= PARALLEL_DOMINANCE * coeffs.serial_overhead(f):
            return f
    raise ValueError("hittade ingen parallelldominerad fråga i egenskapsintervallen")


class _Builder:
    def __init__(self, configs: Sequence[int], seed: int, coeffs: RuntimeCoefficients,
                 ranges: FeatureRanges):
        self.configs = tuple(sorted(configs))
        self.rng = np.random.default_rng(seed)
        self.coeffs = coeffs
        self.ranges = ranges
        self.queries: list[QuerySpec] = []

    def add(self, ideal: int, slack: float = 1.0) -> QuerySpec:
        """slack multiplicerar t(ideal). Största storleken får miss_factor i stället."""
        if ideal not in self.configs:
            raise ValueError(f"{ideal} finns inte i {self.configs}")
        f = _parallel_features(self.rng, self.coeffs, self.ranges, self.configs[-1])
        t_ideal = self.coeffs.runtime(f, ideal)
        t_sla = t_ideal / MISS_FACTOR if ideal == self.configs[-1] and slack == 1.0 else t_ideal * slack
        q = make_query(len(self.queries), f, self.coeffs, self.configs, t_sla)
        if q.ideal_config != ideal:
            raise ValueError(f"fråga {q.id}: etikett {q.ideal_config}, väntat {ideal}")
        self.queries.append(q)
        return q


def gen_micro_w1(configs: Sequence[int] = DEFAULT_CONFIGS, seed: int = 0,
                 block_len: int = 10, pattern: Sequence[str] = ("high", "low", "high", "low", "high"),
                 coeffs: RuntimeCoefficients = RuntimeCoefficients(),
                 ranges: FeatureRanges = FeatureRanges()) -> WorkloadSpec:
    b = _Builder(configs, seed, coeffs, ranges)
    for block in pattern:
        ideal = b.configs[-1] if block == "high" else b.configs[0]
        for _ in range(block_len):
            b.add(ideal)
    return WorkloadSpec("micro-w1", tuple(b.queries), seed, ("micro",))


def gen_micro_w2(configs: Sequence[int] = DEFAULT_CONFIGS, seed: int = 0, length: int = 30,
                 outlier_at: int = 15, outlier_slack: float = 1.5,
                 coeffs: RuntimeCoefficients = RuntimeCoefficients(),
                 ranges: FeatureRanges = FeatureRanges()) -> WorkloadSpec:
    """En snabb fråga (ideal = minsta storleken, generös t_sla) bland ideal-största."""
    if not 0 <= outlier_at < length:
        raise ValueError(f"outlier_at måste ligga i [0, {length}): {outlier_at}")
    b = _Builder(configs, seed, coeffs, ranges)
    for i in range(length):
        if i == outlier_at:
            b.add(b.configs[0], slack=outlier_slack)
        else:
            b.add(b.configs[-1])
    return WorkloadSpec("micro-w2", tuple(b.queries), seed, ("micro",))


def gen_micro_w3(configs: Sequence[int] = DEFAULT_CONFIGS, seed: int = 0, block_len: int = 10,
                 n_blocks: int = 4, mix_ratio: float = 0.5,
                 high: tuple[int, int] = (12, 10), low: tuple[int, int] = (4, 6),
                 coeffs: RuntimeCoefficients = RuntimeCoefficients(),
                 ranges: FeatureRanges = FeatureRanges()) -> WorkloadSpec:
    """Udda block (1, 3, ...) blandar high-paret, jämna low-paret.

    Inom ett block får fråga i första medlemmen om (i * mix_ratio) % 1 < mix_ratio,
    annars den andra; mix_ratio 0.5 ger strikt växling.
    """
    if not 0 < mix_ratio <= 1:
        raise ValueError(f"mix_ratio måste ligga i (0, 1]: {mix_ratio}")
    b = _Builder(configs, seed, coeffs, ranges)
    for block in range(n_blocks):
        first, second = high if block % 2 == 0 else low
        for i in range(block_len):
            b.add(first if (i * mix_ratio) % 1 < mix_ratio else second)
    return WorkloadSpec("micro-w3", tuple(b.queries), seed, ("micro",))


MICRO_WORKLOADS = {
    "micro-w1": gen_micro_w1,
    "micro-w2": gen_micro_w2,
    "micro-w3": gen_micro_w3,
}
