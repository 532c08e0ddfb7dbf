"""Sessionsmiljö: Initialize / Query / Terminate.

En session äger aktuell konfiguration, sitt spår och (för Shuffled-Scaling) en
levande mini-partitionslayout som planeras om vid varje storleksbyte.
Sessioner muteras sekventiellt av en ägare; olika sessioner delar inget tillstånd.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from elastic_scaler.core.types import (
    ConfigSet,
    QuerySpec,
    SessionTrace,
    TraceEntry,
    TransitionRecord,
)
from elastic_scaler.errors import ConfigurationError, SessionClosedError, UnknownSessionError
from elastic_scaler.placement.costs import (
    StorageProfile,
    estimate_ingest_time,
    estimate_reconfig_time,
)
from elastic_scaler.placement.layout import (
    DYNAMIC,
    SHUFFLED,
    STRATEGIES,
    PartitionLayout,
    apply_plan,
    build_uniform_layout,
    default_j,
    plan_shuffle_resize,
)
from elastic_scaler.policies.base import ScalingPolicy
from elastic_scaler.simenv.pricing import PriceModel, vm_deploy_cost, vm_transition_cost
from elastic_scaler.simenv.runtime import RuntimeModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dataset:
    """Beskrivning av användarens data vid Initialize."""
    name: str = "lineorder"
    table_bytes: float = 0.0
    strategy: str = SHUFFLED
    d_data: int | None = None

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ConfigurationError(f"okänd placeringsstrategi: {self.strategy}")
        if self.table_bytes < 0:
            raise ConfigurationError("table_bytes får inte vara negativ")

    @classmethod
    def from_config(cls, cfg) -> "Dataset":
        p = cfg.section("placement")
        d_data = p.get("d_data")
        return cls(
            name=str(p.get("relation", "lineorder")),
            table_bytes=float(p.get("table_bytes", 0.0)),
            strategy=str(p.get("strategy", SHUFFLED)),
            d_data=int(d_data) if d_data else None,
        )


class Session:
    def __init__(self, session_id: str, dataset: Dataset, config_set: ConfigSet,
                 policy: ScalingPolicy | None, runtime_model: RuntimeModel,
                 price: PriceModel, storage: StorageProfile):
        self.id = session_id
        self.dataset = dataset
        self.config_set = config_set
        self.current_config = config_set.init_c
        self.policy = policy
        self.runtime_model = runtime_model
        self.price = price
        self.storage = storage
        self.closed = False
        self._entries: list[TraceEntry] = []
        self._transitions: list[TransitionRecord] = []
        self._pending: int | None = None
        self.deploy = vm_deploy_cost(config_set.sizes[-1], price)

        self.layout: PartitionLayout | None = None
        if dataset.strategy == SHUFFLED:
            j = default_j(config_set.sizes, config_set.init_c)
            self.layout = build_uniform_layout(dataset.table_bytes, config_set.init_c, j,
                                               relation=dataset.name)
        self.ingest_s = estimate_ingest_time(
            dataset.strategy, dataset.table_bytes, storage, config_set.sizes,
            init_c=config_set.init_c,
            d_data=dataset.d_data if dataset.strategy == DYNAMIC else None,
        )

    @property
    def trace(self) -> SessionTrace:
        return SessionTrace(tuple(self._entries), self.config_set, tuple(self._transitions))

    def _switch(self, target: int) -> None:
        if target not in self.config_set:
            raise ConfigurationError(f"policyn valde {target}, utanför {self.config_set.sizes}")
        if target == self.current_config:
            return
        vm = vm_transition_cost(self.current_config, target, self.price)
        reconfig_s = 0.0
        if self.layout is not None:
            plan = plan_shuffle_resize(self.layout, target)
            reconfig_s = estimate_reconfig_time(plan, self.storage, self.dataset.strategy)
            self.layout = apply_plan(self.layout, plan)
        self._transitions.append(TransitionRecord(
            before_query=len(self._entries),
            from_config=self.current_config,
            to_config=target,
            vm_latency_s=vm.latency_s,
            vm_cost=vm.cost,
            reconfig_s=reconfig_s,
        ))
        self.current_config = target

    def run(self, query: QuerySpec, t_sla: float | None = None) -> TraceEntry:
        if self.closed:
            raise SessionClosedError(f"session {self.id} är avslutad")
        sla = query.t_sla if t_sla is None else float(t_sla)
        if sla <= 0:
            raise ValueError(f"t_sla måste vara > 0: {sla}")

        # reaktiva byten verkställs först när nästa fråga kommer
        target, self._pending = self._pending, None
        if self.policy is not None:
            choice = self.policy.choose_before(query, sla, self.current_config)
            if choice is not None:
                target = choice
        if target is not None:
            self._switch(target)

        t_real = self.runtime_model.runtime(query, self.current_config)
        entry = TraceEntry.record(query.id, self.current_config, t_real, sla,
                                  self.price.per_vm_second)
        self._entries.append(entry)

        if self.policy is not None:
            choice = self.policy.observe_after(entry, query)
            if choice is not None:
                if choice not in self.config_set:
                    raise ConfigurationError(
                        f"policyn valde {choice}, utanför {self.config_set.sizes}")
                self._pending = choice
        return entry

    def close(self) -> SessionTrace:
        if self.closed:
            raise SessionClosedError(f"session {self.id} är redan avslutad")
        self.closed = True
        return self.trace


class ScalingService:
    """Håller sessioner under id. Id:n är deterministiska (s1, s2, ...)."""

    def __init__(self, runtime_model: RuntimeModel | None = None,
                 price: PriceModel | None = None, storage: StorageProfile | None = None):
        self.runtime_model = runtime_model or RuntimeModel()
        self.price = price or PriceModel()
        self.storage = storage or StorageProfile()
        self._sessions: dict[str, Session] = {}
        self._ids = itertools.count(1)

    def initialize(self, dataset: Dataset, init_c: int, configs, *,
                   policy: ScalingPolicy | None = None) -> str:
        config_set = ConfigSet(tuple(sorted(configs)), init_c)
        session_id = f"s{next(self._ids)}"
        self._sessions[session_id] = Session(session_id, dataset, config_set, policy,
                                             self.runtime_model, self.price, self.storage)
        logger.info("Session %s startad: %s, init_c=%s, strategi=%s, uppstart %.0f s",
                    session_id, config_set.sizes, init_c, dataset.strategy,
                    self._sessions[session_id].deploy.latency_s)
        return session_id

    def session(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSessionError(f"okänd session: {session_id}") from None

    def query(self, session_id: str, query: QuerySpec, t_sla: float | None = None) -> TraceEntry:
        return self.session(session_id).run(query, t_sla)

    def terminate(self, session_id: str) -> SessionTrace:
        trace = self.session(session_id).close()
        logger.info("Session %s avslutad efter %d frågor (%d byten)",
                    session_id, len(trace), len(trace.transitions))
        return trace
