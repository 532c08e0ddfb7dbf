"""Tester för sessions-API:t, körtidsmodellen och VM-prissättningen."""
from __future__ import annotations

import json

import pytest

from elastic_scaler.core.types import FeatureVector, QuerySpec
from elastic_scaler.errors import ConfigurationError, SessionClosedError, UnknownSessionError
from elastic_scaler.placement.layout import STATIC_REPLICATED
from elastic_scaler.policies.base import BasePolicy
from elastic_scaler.simenv.pricing import PriceModel, vm_deploy_cost, vm_transition_cost
from elastic_scaler.simenv.runtime import RuntimeModel, synthetic_runtime
from elastic_scaler.simenv.session import Dataset, ScalingService
from elastic_scaler.simenv.workload_io import query_from_dict, read_workload, write_workload

CONFIGS = (4, 6, 8, 10, 12)


def make_query(qid: int = 0, t_sla: float = 10.0) -> QuerySpec:
    runtimes = {c: synthetic_runtime(48.0, 2.0, c) for c in CONFIGS}
    return QuerySpec(qid, FeatureVector(12000.0, 1000.0, 50.0), runtimes, t_sla)


class FixedChoice(BasePolicy):
    """Väljer alltid samma storlek före varje fråga."""
    name = "fixed"
    proactive = True

    def __init__(self, config_set, target):
        super().__init__(config_set)
        self.target = target

    def choose_before(self, query, t_sla, current):
        return self.target


def test_synthetic_runtime_law():
    assert synthetic_runtime(48.0, 2.0, 4) == pytest.approx(14.0)
    assert synthetic_runtime(48.0, 2.0, 12) == pytest.approx(6.0)
    with pytest.raises(ValueError):
        synthetic_runtime(1.0, 1.0, 0)


def test_cache_modes_scale_cold_runtime():
    q = make_query()
    assert RuntimeModel().runtime(q, 4) == pytest.approx(14.0)
    assert RuntimeModel(cache_mode="warm", warm_factor=0.7).runtime(q, 4) == pytest.approx(9.8)
    assert RuntimeModel(cache_mode="contention").runtime(q, 4) == pytest.approx(14.0 * 1.2)
    with pytest.raises(ValueError):
        RuntimeModel(cache_mode="hot")
    with pytest.raises(ValueError):
        RuntimeModel(warm_factor=1.5)


def test_noise_is_deterministic_per_query_and_size():
    a = RuntimeModel(noise_sigma=0.2, seed=7)
    b = RuntimeModel(noise_sigma=0.2, seed=7)
    q = make_query(3)
    assert a.runtime(q, 8) == b.runtime(q, 8)
    assert a.noise(3, 8) != a.noise(3, 10)
    assert a.noise(3, 8) != RuntimeModel(noise_sigma=0.2, seed=8).noise(3, 8)
    assert RuntimeModel().noise(3, 8) == 1.0


def test_session_lifecycle_and_ids():
    service = ScalingService()
    s1 = service.initialize(Dataset(), 4, CONFIGS)
    s2 = service.initialize(Dataset(), 6, CONFIGS)
    assert (s1, s2) == ("s1", "s2")

    entry = service.query(s1, make_query(0, t_sla=14.0))
    assert entry.chosen_config == 4
    assert entry.ratio == pytest.approx(1.0)
    # t_sla i anropet vinner över frågans
    assert service.query(s1, make_query(1), t_sla=7.0).ratio == pytest.approx(2.0)

    trace = service.terminate(s1)
    assert len(trace) == 2
    assert trace.transitions == ()
    with pytest.raises(SessionClosedError):
        service.query(s1, make_query(2))
    with pytest.raises(SessionClosedError):
        service.terminate(s1)
    # den andra sessionen påverkas inte
    assert service.query(s2, make_query(0)).chosen_config == 6


def test_unknown_session_is_key_error():
    service = ScalingService()
    with pytest.raises(UnknownSessionError):
        service.query("s99", make_query())
    with pytest.raises(KeyError):
        service.terminate("nope")


def test_initialize_validates_configs():
    service = ScalingService()
    with pytest.raises(ConfigurationError):
        service.initialize(Dataset(), 5, CONFIGS)
    with pytest.raises(ConfigurationError):
        service.initialize(Dataset(), 4, ())
    # osorterad lista accepteras och sorteras
    sid = service.initialize(Dataset(), 4, (12, 4, 8))
    assert service.session(sid).config_set.sizes == (4, 8, 12)


def test_invalid_sla_rejected():
    service = ScalingService()
    sid = service.initialize(Dataset(), 4, CONFIGS)
    with pytest.raises(ValueError):
        service.query(sid, make_query(), t_sla=0.0)


def test_transition_recorded_with_vm_and_reconfig_cost():
    price = PriceModel(per_vm_second=0.5)
    service = ScalingService(price=price)
    dataset = Dataset(table_bytes=10_000_000_000)
    sid = service.initialize(dataset, 4, CONFIGS, policy=None)
    session = service.session(sid)
    session.policy = FixedChoice(session.config_set, 12)

    entry = service.query(sid, make_query())
    assert entry.chosen_config == 12
    trace = service.terminate(sid)
    (tr,) = trace.transitions
    assert (tr.before_query, tr.from_config, tr.to_config) == (0, 4, 12)
    assert tr.vm_latency_s == pytest.approx(10.0)
    assert tr.vm_cost == pytest.approx(8 * 10.0 * 0.5)
    assert tr.reconfig_s > 0
    assert session.layout.workers == 12
    assert session.layout.is_balanced()
    assert session.ingest_s > 0
    assert session.deploy.latency_s == pytest.approx(17.0)
    assert session.deploy.cost == pytest.approx(12 * 17.0 * 0.5)


class Toggle(BasePolicy):
    """Reaktiv: växlar mellan minsta och största storleken efter varje fråga."""
    name = "toggle"

    def observe_after(self, entry, query):
        sizes = self.config_set.sizes
        return sizes[-1] if entry.chosen_config == sizes[0] else sizes[0]


def test_reactive_switch_waits_for_next_query():
    service = ScalingService(price=PriceModel(per_vm_second=1.0))
    sid = service.initialize(Dataset(), 4, CONFIGS)
    session = service.session(sid)
    session.policy = Toggle(session.config_set)
    service.query(sid, make_query(0))
    assert session.current_config == 4
    service.query(sid, make_query(1))
    trace = service.terminate(sid)
    assert [e.chosen_config for e in trace] == [4, 12]
    # bytet efter sista frågan körs aldrig och registreras inte
    assert [(t.before_query, t.to_config) for t in trace.transitions] == [(1, 12)]
    assert session.current_config == 12


def test_static_strategy_has_no_reconfig_time():
    service = ScalingService()
    sid = service.initialize(Dataset(table_bytes=1e9, strategy=STATIC_REPLICATED), 4, CONFIGS)
    session = service.session(sid)
    session.policy = FixedChoice(session.config_set, 10)
    service.query(sid, make_query())
    (tr,) = service.terminate(sid).transitions
    assert tr.reconfig_s == 0.0
    assert session.layout is None


def test_choice_outside_configs_rejected():
    service = ScalingService()
    sid = service.initialize(Dataset(), 4, CONFIGS)
    session = service.session(sid)
    session.policy = FixedChoice(session.config_set, 7)
    with pytest.raises(ConfigurationError):
        service.query(sid, make_query())


def test_vm_transition_costs():
    price = PriceModel(per_vm_second=2.0, vm_stop_s=27.0, vm_restart_s=10.0)
    up = vm_transition_cost(4, 6, price)
    down = vm_transition_cost(12, 4, price)
    assert (up.latency_s, up.cost) == (10.0, 2 * 10.0 * 2.0)
    assert (down.latency_s, down.cost) == (27.0, 8 * 27.0 * 2.0)
    assert vm_transition_cost(8, 8, price).cost == 0.0
    deploy = vm_deploy_cost(12, price)
    assert (deploy.latency_s, deploy.cost) == (17.0, 12 * 17.0 * 2.0)
    with pytest.raises(ValueError):
        vm_deploy_cost(0, price)
    with pytest.raises(ValueError):
        PriceModel(per_vm_second=-1)


def test_dataset_validation():
    with pytest.raises(ConfigurationError):
        Dataset(strategy="magic")
    with pytest.raises(ConfigurationError):
        Dataset(table_bytes=-5)


def test_workload_file_read_back(tmp_path):
    queries = [make_query(i, t_sla=5.0 + i) for i in range(3)]
    path = write_workload(queries, tmp_path / "w.jsonl")
    back = read_workload(path)
    assert [q.id for q in back] == [0, 1, 2]
    assert back[1].true_runtime == queries[1].true_runtime
    assert back[2].t_sla == 7.0


def test_workload_missing_field_is_value_error(tmp_path):
    with pytest.raises(ValueError):
        query_from_dict({"id": 1, "features": {"est_max_cost": 1, "est_rows": 1,
                                               "est_width": 1}})
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps({"id": 1}) + "\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_workload(bad)
