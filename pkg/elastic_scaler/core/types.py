"""Domäntyper som delas av alla moduler.

Alla typer är immutabla värden (frozen dataclasses) och kan delas fritt mellan
trådar. En konfiguration = ett klusterstorlek (antal worker-VM:ar).
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field, replace

from elastic_scaler.errors import ConfigurationError


@dataclass(frozen=True)
class ConfigSet:
    sizes: tuple[int, ...]
    init_c: int

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not sizes:
            raise ConfigurationError("configs får inte vara tom")
        if any(s < 1 for s in sizes):
            raise ConfigurationError(f"alla klusterstorlekar måste vara >= 1: {sizes}")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ConfigurationError(f"configs måste vara strikt stigande: {sizes}")
        if self.init_c not in sizes:
            raise ConfigurationError(f"init_c={self.init_c} finns inte i configs {sizes}")

    @classmethod
    def of(cls, sizes: Iterable[int], init_c: int | None = None) -> "ConfigSet":
        ordered = tuple(sizes)
        return cls(ordered, ordered[0] if init_c is None and ordered else init_c)

    @property
    def min(self) -> int:
        return self.sizes[0]

    @property
    def max(self) -> int:
        return self.sizes[-1]

    def __contains__(self, c: object) -> bool:
        return c in self.sizes

    def __iter__(self) -> Iterator[int]:
        return iter(self.sizes)

    def __len__(self) -> int:
        return len(self.sizes)

    def next_larger(self, c: int) -> int | None:
        i = self.sizes.index(c)
        return self.sizes[i + 1] if i + 1 < len(self.sizes) else None

    def next_smaller(self, c: int) -> int | None:
        i = self.sizes.index(c)
        return self.sizes[i - 1] if i > 0 else None

    def nearest(self, u: float) -> int:
        """Närmaste storlek till ett kontinuerligt värde, klampat. Lika avstånd -> mindre."""
        if u <= self.min:
            return self.min
        if u >= self.max:
            return self.max
        return min(self.sizes, key=lambda c: (abs(c - u), c))

    def as_dict(self) -> dict:
        return {"sizes": list(self.sizes), "init_c": self.init_c}


@dataclass(frozen=True)
class FeatureVector:
    """Planegenskaper för en fråga. workers fylls i per kandidatkonfiguration."""
    est_max_cost: float
    est_rows: float
    est_width: float
    workers: int = 0

    def __post_init__(self) -> None:
        for name in ("est_max_cost", "est_rows", "est_width", "workers"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} måste vara >= 0")

    def with_workers(self, c: int) -> "FeatureVector":
        return replace(self, workers=int(c))

    def as_dict(self) -> dict:
        return {
            "est_max_cost": self.est_max_cost,
            "est_rows": self.est_rows,
            "est_width": self.est_width,
            "workers": self.workers,
        }


@dataclass(frozen=True)
class TrainingRow:
    """En observation för runtime-modellen: (planegenskaper, storlek, körtid)."""
    features: FeatureVector
    config: int
    runtime: float


@dataclass(frozen=True, eq=True)
class QuerySpec:
    id: int
    features: FeatureVector
    true_runtime: Mapping[int, float] = field(hash=False)  # kalla körtider per storlek
    t_sla: float
    ideal_config: int | None = None                      # generatorns etikett (valfri)

    def __post_init__(self) -> None:
        if self.t_sla <= 0:
            raise ValueError(f"fråga {self.id}: t_sla måste vara > 0")
        runtimes = {int(c): float(t) for c, t in self.true_runtime.items()}
        if any(t <= 0 for t in runtimes.values()):
            raise ValueError(f"fråga {self.id}: alla körtider måste vara > 0")
        object.__setattr__(self, "true_runtime", runtimes)

    def covers(self, configs: ConfigSet) -> bool:
        return all(c in self.true_runtime for c in configs.sizes)

    def runtime_at(self, c: int) -> float:
        try:
            return self.true_runtime[c]
        except KeyError:
            raise ValueError(f"fråga {self.id} saknar körtid för {c} workers") from None


@dataclass(frozen=True)
class TraceEntry:
    query_id: int
    chosen_config: int
    t_real: float
    t_sla: float
    ratio: float
    cost: float

    @classmethod
    def record(cls, query_id: int, chosen_config: int, t_real: float, t_sla: float,
               per_vm_second: float) -> "TraceEntry":
        return cls(
            query_id=query_id,
            chosen_config=chosen_config,
            t_real=t_real,
            t_sla=t_sla,
            ratio=t_real / t_sla,
            cost=chosen_config * per_vm_second * t_real,
        )


@dataclass(frozen=True)
class TransitionRecord:
    """Ett konfigurationsbyte under sessionen (ingår inte i CS(Q) som default)."""
    before_query: int          # index för nästa fråga som körs på to_config
    from_config: int
    to_config: int
    vm_latency_s: float
    vm_cost: float
    reconfig_s: float = 0.0


@dataclass(frozen=True)
class SessionTrace:
    entries: tuple[TraceEntry, ...]
    config_set: ConfigSet
    transitions: tuple[TransitionRecord, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        for e in self.entries:
            if e.chosen_config not in self.config_set:
                raise ConfigurationError(
                    f"fråga {e.query_id} kördes på {e.chosen_config}, utanför configs")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[TraceEntry]:
        return iter(self.entries)

    @property
    def ratios(self) -> list[float]:
        return [e.ratio for e in self.entries]

    @property
    def configs_used(self) -> list[int]:
        return [e.chosen_config for e in self.entries]

    def concat(self, other: "SessionTrace") -> "SessionTrace":
        if other.config_set.sizes != self.config_set.sizes:
            raise ConfigurationError("kan inte slå ihop spår med olika configs")
        return SessionTrace(self.entries + other.entries, self.config_set,
                            self.transitions + other.transitions)
