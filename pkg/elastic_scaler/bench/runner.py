"""Kör en (policy, arbetslast)-session från början till slut."""
from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

from elastic_scaler.config import Config
from elastic_scaler.core.metrics import cost_of_service, performance_ratio, ratio_stats
from elastic_scaler.core.types import ConfigSet, SessionTrace
from elastic_scaler.errors import ConfigurationError
from elastic_scaler.placement.costs import StorageProfile
from elastic_scaler.policies.factory import make_policy
from elastic_scaler.policies.oml import PerceptronModel
from elastic_scaler.simenv.pricing import PriceModel
from elastic_scaler.simenv.runtime import RuntimeModel
from elastic_scaler.simenv.session import Dataset, ScalingService
from elastic_scaler.workloads.generator import WorkloadSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolicySpec:
    name: str
    params: Mapping[str, Any] = field(default_factory=dict)
    model: PerceptronModel | None = field(default=None, compare=False)

    def with_params(self, params: Mapping[str, Any]) -> "PolicySpec":
        return PolicySpec(self.name, {**self.params, **params}, self.model)


@dataclass(frozen=True)
class SimEnv:
    runtime_model: RuntimeModel = RuntimeModel()
    price: PriceModel = PriceModel()
    storage: StorageProfile = StorageProfile()
    dataset: Dataset = Dataset()
    include_transitions: bool = False

    @classmethod
    def from_config(cls, cfg: Config, seed: int | None = None) -> "SimEnv":
        sim = cfg.section("simulation")
        return cls(
            runtime_model=RuntimeModel.from_config(cfg, seed=seed),
            price=PriceModel.from_config(cfg),
            storage=StorageProfile.from_config(cfg),
            dataset=Dataset.from_config(cfg),
            include_transitions=bool(sim.get("include_transitions", False)),
        )


def config_set_from_config(cfg: Config) -> ConfigSet:
    sim = cfg.section("simulation")
    return ConfigSet(tuple(sim.get("configs", (4, 6, 8, 10, 12))), int(sim.get("init_c", 4)))


def run_session(spec: PolicySpec, workload: WorkloadSpec, config_set: ConfigSet,
                env: SimEnv = SimEnv()) -> SessionTrace:
    if not workload.covers(config_set):
        raise ConfigurationError(
            f"arbetslasten {workload.name} saknar körtider för någon av {config_set.sizes}")
    service = ScalingService(env.runtime_model, env.price, env.storage)
    policy = make_policy(spec.name, config_set, spec.params, spec.model)
    sid = service.initialize(env.dataset, config_set.init_c, config_set.sizes, policy=policy)
    for q in workload.queries:
        service.query(sid, q)
    return service.terminate(sid)


@dataclass(frozen=True)
class SessionSummary:
    n: int
    pr: float
    cs: float
    rel_std: float

    def as_dict(self) -> dict:
        return {"n": self.n, "pr": self.pr, "cs": self.cs, "rel_std": self.rel_std}


def summarize_trace(trace: SessionTrace, env: SimEnv = SimEnv()) -> SessionSummary:
    return SessionSummary(
        n=len(trace),
        pr=performance_ratio(trace),
        cs=cost_of_service(trace, env.price, include_transitions=env.include_transitions),
        rel_std=ratio_stats(trace).relative_std_dev,
    )
