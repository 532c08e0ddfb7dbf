"""Sessionsmetriker: Performance Ratio PR(Q), Cost of Service CS(Q) och
fördelningsstatistik över kvoterna t_real/t_sla.

Rena funktioner (inga sidoeffekter) -> lätta att testa.

  * PR(Q) = medel av kvoterna, delat med antal poster.
  * CS(Q) = summa över frågor av chosen_config * pris per VM-sekund * t_real.
    Byteskostnader (VM start/stopp) räknas bara med om include_transitions=True.
  * Percentiler med nearest-rank (ingen interpolering), populations-std.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from elastic_scaler.core.types import SessionTrace
from elastic_scaler.errors import EmptySessionError

TABLE_PERCENTILES = (75, 80, 85, 90)


def _require_entries(trace: SessionTrace) -> None:
    if len(trace) == 0:
        raise EmptySessionError("tom session")


def performance_ratio(trace: SessionTrace) -> float:
    _require_entries(trace)
    # fsum är exakt -> ordningsoberoende
    return math.fsum(trace.ratios) / len(trace)


class PricedPerVmSecond(Protocol):
    per_vm_second: float


def cost_of_service(trace: SessionTrace, price: float | PricedPerVmSecond,
                    include_transitions: bool = False) -> float:
    """price: pris per VM-sekund, eller en prismodell med attributet per_vm_second."""
    per_vm_second = float(getattr(price, "per_vm_second", price))
    if per_vm_second < 0:
        raise ValueError("priset per VM-sekund får inte vara negativt")
    total = math.fsum(e.chosen_config * per_vm_second * e.t_real for e in trace.entries)
    if include_transitions:
        total += math.fsum(t.vm_cost for t in trace.transitions)
    return total


def nearest_rank(sorted_values: list[float], p: float) -> float:
    """Nearest-rank-percentil: minsta värdet med minst p % av posterna <= värdet."""
    if not sorted_values:
        raise EmptySessionError("tom session")
    if not 0 < p <= 100:
        raise ValueError(f"percentil måste ligga i (0, 100]: {p}")
    rank = math.ceil(p / 100.0 * len(sorted_values))
    return sorted_values[max(rank, 1) - 1]


@dataclass(frozen=True)
class RatioStats:
    n: int
    mean: float
    std_dev: float
    relative_std_dev: float
    percentiles: dict[int, float] = field(default_factory=dict)

    def percentile(self, p: int) -> float:
        return self.percentiles[p]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "std_dev": self.std_dev,
            "relative_std_dev": self.relative_std_dev,
            "percentiles": {str(p): v for p, v in sorted(self.percentiles.items())},
        }


def ratio_stats(trace: SessionTrace,
                percentiles: tuple[int, ...] = TABLE_PERCENTILES) -> RatioStats:
    _require_entries(trace)
    ratios = np.asarray(trace.ratios, dtype=float)
    mean = math.fsum(trace.ratios) / len(ratios)
    std = float(np.sqrt(np.mean((ratios - mean) ** 2)))
    ordered = sorted(trace.ratios)
    return RatioStats(
        n=len(ratios),
        mean=mean,
        std_dev=std,
        relative_std_dev=std / mean if mean > 0 else float("inf"),
        percentiles={p: nearest_rank(ordered, p) for p in percentiles},
    )


def sla_violation_fraction(trace: SessionTrace, w: float = 1.0) -> float:
    """Andel frågor med t_real > w * t_sla (jämförs via den lagrade kvoten)."""
    if w < 1:
        raise ValueError(f"vikten w måste vara >= 1: {w}")
    _require_entries(trace)
    return sum(1 for e in trace.entries if e.ratio > w) / len(trace)
