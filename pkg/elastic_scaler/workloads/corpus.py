"""Offline-träningskorpus för perceptronen (default 6120 rader)."""
from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from elastic_scaler.core.types import TrainingRow
from elastic_scaler.workloads.generator import FeatureRanges, RuntimeCoefficients, sample_features

logger = logging.getLogger(__name__)

DEFAULT_CORPUS_SIZE = 6120


def gen_training_corpus(n: int = DEFAULT_CORPUS_SIZE, seed: int = 0,
                        configs: Sequence[int] = (4, 6, 8, 10, 12),
                        coeffs: RuntimeCoefficients = RuntimeCoefficients(),
                        ranges: FeatureRanges = FeatureRanges(),
                        runtime_factor: float = 1.0) -> list[TrainingRow]:
    """n rader (egenskaper med workers ifyllt, storlek, körtid).

    Storleken dras likformigt ur configs. runtime_factor skalar alla körtider
    (t.ex. varm cache eller contention).
    """
    if n < 1:
        raise ValueError(f"n måste vara >= 1: {n}")
    if runtime_factor <= 0:
        raise ValueError("runtime_factor måste vara > 0")
    sizes = tuple(configs)
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        f = sample_features(rng, ranges)
        c = int(sizes[int(rng.integers(len(sizes)))])
        rows.append(TrainingRow(f.with_workers(c), c, coeffs.runtime(f, c) * runtime_factor))
    logger.info("Träningskorpus: %d rader (seed=%s, faktor=%s)", n, seed, runtime_factor)
    return rows
