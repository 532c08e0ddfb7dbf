"""Tester för arbetslastgeneratorerna (mikro, makro, träningskorpus)."""
from __future__ import annotations

import numpy as np
import pytest

from elastic_scaler.bench.runner import PolicySpec, run_session
from elastic_scaler.core.types import ConfigSet, FeatureVector, QuerySpec
from elastic_scaler.workloads.corpus import gen_training_corpus
from elastic_scaler.workloads.generator import (
    RuntimeCoefficients,
    WorkloadSpec,
    gen_query_pool,
    label_ideal_config,
)
from elastic_scaler.workloads.macro import SUITE, gen_random_workload, ten_workload_suite
from elastic_scaler.workloads.micro import (
    PARALLEL_DOMINANCE,
    gen_micro_w1,
    gen_micro_w2,
    gen_micro_w3,
)

CONFIGS = (4, 6, 8, 10, 12)
COEFFS = RuntimeCoefficients()


@pytest.fixture(scope="module")
def pool():
    return gen_query_pool(300, seed=0, configs=CONFIGS)


def test_w1_blocks():
    w1 = gen_micro_w1(CONFIGS, seed=0)
    assert len(w1) == 50
    assert w1.labels == [12] * 10 + [4] * 10 + [12] * 10 + [4] * 10 + [12] * 10
    assert w1.covers(ConfigSet(CONFIGS, 4))


def test_w1_large_queries_miss_slightly_on_largest():
    w1 = gen_micro_w1(CONFIGS, seed=0, block_len=3)
    for q in w1.queries:
        if q.ideal_config == 12:
            assert q.runtime_at(12) / q.t_sla == pytest.approx(1.05)


def test_w2_single_outlier():
    w2 = gen_micro_w2(CONFIGS, seed=0)
    assert len(w2) == 30
    assert w2.labels == [12] * 15 + [4] + [12] * 14
    outlier = w2.queries[15]
    assert outlier.t_sla == pytest.approx(1.5 * outlier.runtime_at(4))
    with pytest.raises(ValueError):
        gen_micro_w2(CONFIGS, outlier_at=30)


def test_w2_oracle_switches_twice():
    w2 = gen_micro_w2(CONFIGS, seed=0)
    trace = run_session(PolicySpec("oracle"), w2, ConfigSet(CONFIGS, 12))
    assert trace.configs_used == w2.labels
    assert [(t.before_query, t.to_config) for t in trace.transitions] == [(15, 4), (16, 12)]


def test_w3_sawtooth_mix():
    w3 = gen_micro_w3(CONFIGS, seed=0)
    assert len(w3) == 40
    assert w3.labels[:10] == [12, 10] * 5
    assert w3.labels[10:20] == [4, 6] * 5
    assert w3.labels[20:30] == [12, 10] * 5
    # mix_ratio 1 -> bara första medlemmen
    assert set(gen_micro_w3(CONFIGS, seed=0, block_len=4, n_blocks=1, mix_ratio=1.0).labels) == {12}
    with pytest.raises(ValueError):
        gen_micro_w3(CONFIGS, mix_ratio=0.0)


def test_micro_queries_are_parallel_dominated():
    for gen in (gen_micro_w1, gen_micro_w2, gen_micro_w3):
        for q in gen(CONFIGS, seed=5).queries:
            f = q.features
            assert COEFFS.parallel_work(f) / 12 >= PARALLEL_DOMINANCE * COEFFS.serial_overhead(f)


def test_generators_are_deterministic():
    assert gen_micro_w1(CONFIGS, seed=4) == gen_micro_w1(CONFIGS, seed=4)
    assert gen_micro_w1(CONFIGS, seed=4) != gen_micro_w1(CONFIGS, seed=5)
    assert gen_query_pool(20, 1, CONFIGS) == gen_query_pool(20, 1, CONFIGS)


def test_pool_labels_follow_oracle_rule(pool):
    assert len(pool) == 300
    for q in pool:
        assert q.ideal_config == label_ideal_config(q, CONFIGS)
        assert q.true_runtime[4] == pytest.approx(COEFFS.runtime(q.features, 4))
    # målstorlekar utanför configs ger frågor som bara kan landa på ytterkanterna
    labels = {q.ideal_config for q in pool}
    assert {4, 12} <= labels


def test_random_workload_size_and_determinism(pool):
    a = gen_random_workload(100, seed=1, pool=pool, configs=CONFIGS)
    b = gen_random_workload(100, seed=1, pool=pool, configs=CONFIGS)
    assert len(a) == 100
    assert a.queries == b.queries
    assert a.tags == ("random",)


def test_filters(pool):
    ncv = gen_random_workload(50, seed=2, flt="no_convergence", pool=pool, configs=CONFIGS)
    assert all(q.runtime_at(4) > q.t_sla for q in ncv.queries)
    assert all(q.ideal_config != 4 for q in ncv.queries)

    large = gen_random_workload(50, seed=2, flt="large_only", pool=pool, configs=CONFIGS)
    cutoff = sorted((q.features.est_max_cost for q in pool), reverse=True)[89]
    assert all(q.features.est_max_cost >= cutoff for q in large.queries)

    heavy = gen_random_workload(100, seed=2, flt="ideal4_heavy", pool=pool, configs=CONFIGS)
    assert sum(q.ideal_config == 4 for q in heavy.queries) >= 45
    assert heavy.tags == ("random", "ideal4_heavy")


def test_no_convergence_never_ideal_at_smallest():
    """Standardpoolen: ingen fråga i no_convergence får ha ideal = minsta storleken."""
    ncv = gen_random_workload(100, seed=1, flt="no_convergence", configs=CONFIGS)
    assert len(ncv) == 100
    for q in ncv.queries:
        assert q.ideal_config != 4
        assert q.runtime_at(4) > q.t_sla


def test_filter_errors(pool):
    with pytest.raises(ValueError):
        gen_random_workload(10, flt="sorted", pool=pool, configs=CONFIGS)
    fast = QuerySpec(0, FeatureVector(1.0, 1.0, 1.0), {c: 1.0 for c in CONFIGS}, 100.0, 4)
    with pytest.raises(ValueError):
        gen_random_workload(10, flt="no_convergence", pool=[fast], configs=CONFIGS)
    with pytest.raises(ValueError):
        gen_random_workload(0, pool=pool, configs=CONFIGS)


def test_ten_workload_suite(pool):
    suite = ten_workload_suite(seed=0, n=20, pool=pool, configs=CONFIGS)
    assert [w.name for w in suite] == [name for name, _ in SUITE]
    assert all(len(w) == 20 for w in suite)


def test_unknown_tag_rejected():
    with pytest.raises(ValueError):
        WorkloadSpec("x", (), 0, ("weird",))


def test_training_corpus_rows():
    rows = gen_training_corpus(200, seed=3, configs=CONFIGS)
    assert len(rows) == 200
    for r in rows[:20]:
        assert r.features.workers == r.config
        assert r.runtime == pytest.approx(COEFFS.runtime(r.features, r.config))
    warm = gen_training_corpus(200, seed=3, configs=CONFIGS, runtime_factor=0.7)
    assert warm[0].runtime == pytest.approx(0.7 * rows[0].runtime)
    assert {r.config for r in rows} == set(CONFIGS)


def test_default_corpus_size_and_cost_correlation():
    rows = gen_training_corpus(configs=CONFIGS)
    assert len(rows) == 6120
    costs = np.array([r.features.est_max_cost for r in rows])
    runtimes = np.array([r.runtime for r in rows])
    assert np.corrcoef(costs, runtimes)[0, 1] > 0.3
