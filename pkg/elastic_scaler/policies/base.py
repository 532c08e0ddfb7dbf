"""Gemensamt beslutsgränssnitt för skalningspolicyer.

Proaktiva policyer (Oracle, Random, OML) svarar i choose_before, innan frågan körs.
Reaktiva policyer (PI, RL) svarar i observe_after och påverkar nästa fråga.
None betyder "behåll nuvarande konfiguration".
"""
from __future__ import annotations

from collections.abc import Mapping
from typing import Protocol, runtime_checkable

from elastic_scaler.core.types import ConfigSet, QuerySpec, TraceEntry


@runtime_checkable
class ScalingPolicy(Protocol):
    name: str

    def choose_before(self, query: QuerySpec, t_sla: float, current: int) -> int | None: ...

    def observe_after(self, entry: TraceEntry, query: QuerySpec) -> int | None: ...


class BasePolicy:
    """No-op-implementation att ärva från."""

    name = "base"
    proactive = False

    def __init__(self, config_set: ConfigSet):
        self.config_set = config_set

    def choose_before(self, query: QuerySpec, t_sla: float, current: int) -> int | None:
        return None

    def observe_after(self, entry: TraceEntry, query: QuerySpec) -> int | None:
        return None


def closest_to_target(estimates: Mapping[int, float], t_sla: float) -> int:
    """argmin över c av |t(c)/t_sla - 1|. Lika avstånd -> mindre konfiguration."""
    if not estimates:
        raise ValueError("inga kandidatkonfigurationer")
    if t_sla <= 0:
        raise ValueError(f"t_sla måste vara > 0: {t_sla}")
    return min(estimates, key=lambda c: (abs(estimates[c] / t_sla - 1.0), c))
