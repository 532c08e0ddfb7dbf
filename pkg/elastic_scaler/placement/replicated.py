"""Statiska och dynamiska placeringsstrategier.

  * Static-Replicated        – en full, uniform kopia per konfiguration.
  * Static-Replicated Chunks – största konfigurationen har en full kopia; varje
    mindre konfiguration c återanvänder chunkarna på de c första workers och
    lagrar bara kopior av chunkar som ägs av workers utanför prefixet.
  * Dynamic-Scaling          – fast datalager (d_data) skilt från beräkningsnoder.
"""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from elastic_scaler.placement.layout import (
    DYNAMIC,
    STATIC_CHUNKS,
    STATIC_REPLICATED,
    PartitionLayout,
    build_uniform_layout,
    default_j,
)


def _ascending(configs: Iterable[int]) -> tuple[int, ...]:
    sizes = tuple(int(c) for c in configs)
    if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"configs måste vara icke-tom och strikt stigande: {sizes}")
    return sizes


def build_static_replicated(configs: Iterable[int], table_bytes: float,
                            j: int | None = None) -> dict[int, PartitionLayout]:
    sizes = _ascending(configs)
    return {
        c: build_uniform_layout(table_bytes, c, j or default_j(sizes, c),
                                strategy=STATIC_REPLICATED)
        for c in sizes
    }


def stored_bytes(layouts: dict[int, PartitionLayout]) -> float:
    return sum(layout.table_bytes for layout in layouts.values())


@dataclass(frozen=True)
class ChunkCopy:
    mini: int
    owner: int    # worker som har chunken i baskopian
    holder: int   # worker i prefixet som får en extra kopia


@dataclass(frozen=True)
class ReplicatedChunks:
    base: PartitionLayout
    configs: tuple[int, ...]
    copies: dict[int, tuple[ChunkCopy, ...]]

    @property
    def extra_minis(self) -> int:
        return sum(len(c) for c in self.copies.values())

    @property
    def extra_bytes(self) -> float:
        return self.extra_minis * self.base.bytes_per_minipartition

    @property
    def stored_bytes(self) -> float:
        return self.base.table_bytes + self.extra_bytes

    def readable(self, c: int) -> dict[int, frozenset[int]]:
        """Vilka mini-partitioner varje worker i konfiguration c läser."""
        if c not in self.configs:
            raise ValueError(f"{c} finns inte i {self.configs}")
        sets: dict[int, set[int]] = {w: set() for w in range(c)}
        for mini, w in enumerate(self.base.assignment):
            if w < c:
                sets[w].add(mini)
        for cp in self.copies.get(c, ()):
            sets[cp.holder].add(cp.mini)
        return {w: frozenset(s) for w, s in sets.items()}

    def layout_for(self, c: int) -> PartitionLayout:
        owner = [0] * self.base.n_minis
        for w, minis in self.readable(c).items():
            for m in minis:
                owner[m] = w
        return PartitionLayout(self.base.relation, self.base.j, c, tuple(owner),
                               self.base.table_bytes, STATIC_CHUNKS)

    def copy_summary(self, c: int) -> list[tuple[int, int, int]]:
        """(ägare, mottagare, antal mini-partitioner) för konfiguration c."""
        agg: dict[tuple[int, int], int] = {}
        for cp in self.copies.get(c, ()):
            agg[(cp.owner, cp.holder)] = agg.get((cp.owner, cp.holder), 0) + 1
        return [(o, h, n) for (o, h), n in sorted(agg.items())]


def build_static_replicated_chunks(configs: Iterable[int], table_bytes: float,
                                   j: int | None = None) -> ReplicatedChunks:
    sizes = _ascending(configs)
    largest = sizes[-1]
    base = build_uniform_layout(table_bytes, largest, j or default_j(sizes, largest),
                                strategy=STATIC_CHUNKS)
    n = base.n_minis
    copies: dict[int, tuple[ChunkCopy, ...]] = {}
    for c in sizes[:-1]:
        quota, rest = divmod(n, c)
        foreign = [(m, w) for m, w in enumerate(base.assignment) if w >= c]
        it = iter(foreign)
        out: list[ChunkCopy] = []
        for holder in range(c):
            need = quota + (1 if holder < rest else 0) - base.j
            for _ in range(need):
                mini, owner = next(it)
                out.append(ChunkCopy(mini, owner, holder))
        copies[c] = tuple(out)
    return ReplicatedChunks(base, sizes, copies)


@dataclass(frozen=True)
class DynamicLayout:
    data: PartitionLayout
    compute_workers: tuple[int, ...]

    @property
    def d_data(self) -> int:
        return self.data.workers

    @property
    def c_compute(self) -> int:
        return len(self.compute_workers)

    @property
    def is_small(self) -> bool:
        return self.d_data < self.c_compute

    @property
    def is_large(self) -> bool:
        return self.d_data > self.c_compute

    @property
    def variant(self) -> str:
        if self.is_small:
            return "dynamic_small"
        if self.is_large:
            return "dynamic_large"
        return "dynamic_balanced"


def build_dynamic_layout(d_data: int, c_compute: int, table_bytes: float = 0.0,
                         j: int = 1) -> DynamicLayout:
    if d_data < 1 or c_compute < 1:
        raise ValueError(f"d_data och c_compute måste vara >= 1 ({d_data}, {c_compute})")
    data = build_uniform_layout(table_bytes, d_data, j, strategy=DYNAMIC)
    # beräkningsnoderna numreras efter datanoderna -> disjunkta mängder
    return DynamicLayout(data, tuple(range(d_data, d_data + c_compute)))
