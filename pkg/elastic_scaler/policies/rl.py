"""Förstärkningsinlärning med aktiva tillstånd (reaktiv).

Varje tillstånd är en klusterstorlek med belöning R, initialt 1.0. Efter en
fråga på storlek s med kvot r:

  1. R(s) += alpha * (r - R(s))
  2. övriga aktiva x: R(x) += beta * (r * y / z - R(x)),  y = s, z = x  (linjärt drag)
  3. R(s) > 1 -> nästa större storlek blir aktiv, R(s) < 1 -> nästa mindre
  4. välj aktivt tillstånd med R närmast 1.0 (lika -> mindre)

Aktiva tillstånd startar som {init_c} och växer med högst ett per observation.
rl_qlearning_reference är klassisk Q-learning och används inte av policyn.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field

from elastic_scaler.core.types import ConfigSet, QuerySpec, TraceEntry
from elastic_scaler.policies.base import BasePolicy


@dataclass
class RlState:
    alpha: float
    beta: float
    current: int
    rewards: dict[int, float] = field(default_factory=dict)
    active_states: set[int] = field(default_factory=set)

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha måste ligga i (0, 1]: {self.alpha}")
        if not 0 <= self.beta < self.alpha:
            raise ValueError(f"beta måste vara >= 0 och < alpha ({self.beta}, {self.alpha})")
        self.active_states.add(self.current)

    @classmethod
    def start(cls, configs: ConfigSet, alpha: float, beta: float) -> "RlState":
        return cls(alpha=alpha, beta=beta, current=configs.init_c,
                   rewards={c: 1.0 for c in configs}, active_states={configs.init_c})


def rl_observe(state: RlState, entry: TraceEntry, configs: ConfigSet) -> int:
    s = entry.chosen_config
    r = entry.ratio
    state.active_states.add(s)
    state.rewards[s] += state.alpha * (r - state.rewards[s])

    for x in state.active_states:
        if x != s:
            state.rewards[x] += state.beta * (r * s / x - state.rewards[x])

    if state.rewards[s] > 1.0:
        neighbour = configs.next_larger(s)
    elif state.rewards[s] < 1.0:
        neighbour = configs.next_smaller(s)
    else:
        neighbour = None
    if neighbour is not None:
        state.active_states.add(neighbour)

    state.current = min(state.active_states,
                        key=lambda c: (abs(state.rewards[c] - 1.0), c))
    return state.current


def rl_qlearning_reference(q_table: dict[int, dict[int, float]], s: int, a: int,
                           reward: float, alpha: float, gamma: float) -> dict[int, dict[int, float]]:
    """Q(s,a) += alpha * [R(s') + gamma * max_a' Q(s',a') - Q(s,a)], där s' = a.

    Returnerar en ny tabell; indata lämnas orörd.
    """
    table = copy.deepcopy(q_table)
    row = table.setdefault(s, {})
    current = row.get(a, 0.0)
    future = max(table.get(a, {}).values(), default=0.0)
    row[a] = current + alpha * (reward + gamma * future - current)
    return table


class RlPolicy(BasePolicy):
    name = "rl"

    def __init__(self, config_set: ConfigSet, alpha: float = 0.5, beta: float = 0.1):
        super().__init__(config_set)
        self.state = RlState.start(config_set, float(alpha), float(beta))

    def observe_after(self, entry: TraceEntry, query: QuerySpec) -> int | None:
        return rl_observe(self.state, entry, self.config_set)
