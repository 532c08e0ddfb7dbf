"""PI-regulator (reaktiv).

Efter varje fråga:
    y(t)   = medel av de senaste w kvoterna t_real/t_sla
    e(t)   = (y(t) - 1.0) * u(t)          u(t) = VM-antalet frågan kördes på
    u(t+1) = u0 + k_i * sum(e(x), x <= t) + k_p * e(t)

u(t+1) avrundas till närmaste tillåtna storlek (klampat, lika avstånd -> mindre).
Felsekvensen börjar efter första observationen.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field

from elastic_scaler.core.types import ConfigSet, QuerySpec, TraceEntry
from elastic_scaler.policies.base import BasePolicy

logger = logging.getLogger(__name__)


@dataclass
class PiState:
    k_p: float
    k_i: float
    w: int
    u0: float
    error_integral: float = 0.0
    ratio_window: deque = field(default_factory=deque)
    u: float = 0.0

    def __post_init__(self) -> None:
        if self.w < 1:
            raise ValueError(f"fönsterlängden w måste vara >= 1: {self.w}")
        self.w = int(self.w)
        self.ratio_window = deque(self.ratio_window, maxlen=self.w)
        if not self.u:
            self.u = float(self.u0)


def pi_control_output(u0: float, k_p: float, k_i: float, error_integral: float,
                      error: float) -> float:
    """u(t+1) = u0 + k_i * sum(e) + k_p * e(t)."""
    return u0 + k_i * error_integral + k_p * error


def pi_observe(state: PiState, entry: TraceEntry, configs: ConfigSet) -> int:
    state.ratio_window.append(entry.ratio)
    y = math.fsum(state.ratio_window) / len(state.ratio_window)
    error = (y - 1.0) * entry.chosen_config
    state.error_integral += error
    state.u = pi_control_output(state.u0, state.k_p, state.k_i, state.error_integral, error)
    return configs.nearest(state.u)


class PiPolicy(BasePolicy):
    name = "pi"

    def __init__(self, config_set: ConfigSet, k_p: float = 1.0, k_i: float = 0.0, w: int = 1):
        super().__init__(config_set)
        self.state = PiState(k_p=float(k_p), k_i=float(k_i), w=int(w), u0=config_set.init_c)

    def observe_after(self, entry: TraceEntry, query: QuerySpec) -> int | None:
        return pi_observe(self.state, entry, self.config_set)
