"""Referenspolicyer: Oracle (känner verkliga körtider) och Random."""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from elastic_scaler.core.types import ConfigSet, QuerySpec
from elastic_scaler.policies.base import BasePolicy, closest_to_target


def oracle_choose(query: QuerySpec, t_sla: float, configs: Sequence[int]) -> int:
    """Storleken vars verkliga (kalla) körtid ligger närmast t_sla."""
    return closest_to_target({c: query.runtime_at(c) for c in configs}, t_sla)


def random_choose(configs: Sequence[int], rng: np.random.Generator) -> int:
    if not configs:
        raise ValueError("configs får inte vara tom")
    return int(configs[int(rng.integers(len(configs)))])


class OraclePolicy(BasePolicy):
    name = "oracle"
    proactive = True

    def choose_before(self, query: QuerySpec, t_sla: float, current: int) -> int | None:
        return oracle_choose(query, t_sla, self.config_set.sizes)


class RandomPolicy(BasePolicy):
    name = "random"
    proactive = True

    def __init__(self, config_set: ConfigSet, seed: int = 0):
        super().__init__(config_set)
        self.rng = np.random.default_rng(seed)

    def choose_before(self, query: QuerySpec, t_sla: float, current: int) -> int | None:
        return random_choose(self.config_set.sizes, self.rng)
