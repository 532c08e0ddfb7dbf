"""Mini-partitioner och minimala omfördelningsplaner (Shuffled-Scaling).

En relation partitioneras först uniformt över c workers; varje partition delas i
j mini-partitioner. Mini-partition i ligger initialt på worker i // j.

Vid byte c -> c' behåller varje kvarvarande worker så många av sina egna
mini-partitioner som ryms i dess nya kvot; resten (inkl. allt på borttagna
workers) flyttas girigt till workers under kvot, lägsta worker-id först.
Det ger det minsta antalet flyttar bland alla balanserade tilldelningar:
(max(n, m) - min(n, m)) / max(n, m) av datat för n -> m.
"""
from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from functools import reduce

SHUFFLED = "shuffled"
STATIC_REPLICATED = "static_replicated"
STATIC_CHUNKS = "static_replicated_chunks"
DYNAMIC = "dynamic"
STRATEGIES = (SHUFFLED, STATIC_REPLICATED, STATIC_CHUNKS, DYNAMIC)


@dataclass(frozen=True)
class PartitionLayout:
    relation: str
    j: int
    workers: int
    assignment: tuple[int, ...]   # mini-partition-id -> worker-id
    table_bytes: float
    strategy: str = SHUFFLED

    @property
    def n_minis(self) -> int:
        return len(self.assignment)

    @property
    def bytes_per_minipartition(self) -> float:
        return self.table_bytes / self.n_minis if self.n_minis else 0.0

    def counts(self, n_workers: int | None = None) -> list[int]:
        out = [0] * max(n_workers or 0, self.workers)
        for w in self.assignment:
            out[w] += 1
        return out

    def minis_of(self, worker: int) -> list[int]:
        return [m for m, w in enumerate(self.assignment) if w == worker]

    def is_balanced(self) -> bool:
        counts = self.counts()[: self.workers]
        return bool(counts) and max(counts) - min(counts) <= 1

    def as_dict(self) -> dict:
        return {
            "relation": self.relation,
            "strategy": self.strategy,
            "j": self.j,
            "workers": self.workers,
            "table_bytes": self.table_bytes,
            "assignment": list(self.assignment),
        }


@dataclass(frozen=True)
class Move:
    mini: int
    source: int
    destination: int


@dataclass(frozen=True)
class MovementPlan:
    moves: tuple[Move, ...]
    bytes_per_minipartition: float
    from_workers: int
    to_workers: int

    def __post_init__(self) -> None:
        if any(m.source == m.destination for m in self.moves):
            raise ValueError("en flytt får inte ha samma källa och mål")

    def __len__(self) -> int:
        return len(self.moves)

    def bytes_read_per_worker(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for m in self.moves:
            out[m.source] = out.get(m.source, 0.0) + self.bytes_per_minipartition
        return out

    def bytes_written_per_worker(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for m in self.moves:
            out[m.destination] = out.get(m.destination, 0.0) + self.bytes_per_minipartition
        return out

    def as_dict(self) -> dict:
        return {
            "from_workers": self.from_workers,
            "to_workers": self.to_workers,
            "bytes_per_minipartition": self.bytes_per_minipartition,
            "moves": [[m.mini, m.source, m.destination] for m in self.moves],
        }


def lcm_of(values: Iterable[int]) -> int:
    return reduce(math.lcm, values, 1)


def default_j(configs: Iterable[int], c: int) -> int:
    """j så att c*j = lcm(configs) -> varje konfiguration delar antalet mini-partitioner."""
    total = lcm_of([*configs, c])
    return total // c


def build_uniform_layout(table_bytes: float, c: int, j: int, relation: str = "lineorder",
                         strategy: str = SHUFFLED) -> PartitionLayout:
    if c < 1 or j < 1:
        raise ValueError(f"c och j måste vara >= 1 (c={c}, j={j})")
    if table_bytes < 0:
        raise ValueError("table_bytes får inte vara negativ")
    assignment = tuple(m // j for m in range(c * j))
    return PartitionLayout(relation, j, c, assignment, float(table_bytes), strategy)


def _capacities(counts: list[int], n_minis: int, target: int) -> list[int]:
    base, extra = divmod(n_minis, target)
    # +1-platserna går till de workers som redan har flest (maximerar kvarliggande data)
    bonus = set(sorted(range(target), key=lambda w: (-counts[w], w))[:extra])
    return [base + (1 if w in bonus else 0) for w in range(target)]


def plan_shuffle_resize(layout: PartitionLayout, target: int) -> MovementPlan:
    if target < 1:
        raise ValueError(f"målkonfigurationen måste vara >= 1: {target}")
    counts = layout.counts(target)
    capacity = _capacities(counts, layout.n_minis, target)

    kept = [0] * target
    overflow: list[tuple[int, int]] = []   # (mini, källa)
    for w in range(len(counts)):
        minis = layout.minis_of(w)
        keep = capacity[w] if w < target else 0
        if w < target:
            kept[w] = min(len(minis), keep)
        overflow.extend((m, w) for m in minis[keep:])

    moves: list[Move] = []
    it = iter(overflow)
    for w in range(target):
        for _ in range(capacity[w] - kept[w]):
            mini, src = next(it)
            moves.append(Move(mini, src, w))
    return MovementPlan(tuple(moves), layout.bytes_per_minipartition, layout.workers, target)


def apply_plan(layout: PartitionLayout, plan: MovementPlan) -> PartitionLayout:
    assignment = list(layout.assignment)
    for m in plan.moves:
        if assignment[m.mini] != m.source:
            raise ValueError(f"mini-partition {m.mini} ligger inte på worker {m.source}")
        assignment[m.mini] = m.destination
    return PartitionLayout(layout.relation, layout.j, plan.to_workers, tuple(assignment),
                           layout.table_bytes, layout.strategy)


def movement_fraction(plan: MovementPlan, layout: PartitionLayout) -> float:
    """Flyttade bytes / tabellens bytes."""
    if layout.table_bytes <= 0 or layout.n_minis == 0:
        return 0.0
    return len(plan.moves) / layout.n_minis
