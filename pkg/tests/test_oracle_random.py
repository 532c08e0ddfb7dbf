"""Tester för Oracle, Random, urvalsregeln och policyfabriken."""
from __future__ import annotations

from collections import Counter

import numpy as np
import pytest

from elastic_scaler.core.types import ConfigSet, FeatureVector, QuerySpec
from elastic_scaler.errors import ConfigurationError
from elastic_scaler.policies.base import ScalingPolicy, closest_to_target
from elastic_scaler.policies.factory import POLICY_NAMES, make_policy
from elastic_scaler.policies.oracle import OraclePolicy, RandomPolicy, oracle_choose, random_choose

CONFIGS = ConfigSet((4, 6, 8, 10, 12), 4)


def query(runtimes: dict[int, float], t_sla: float = 10.0) -> QuerySpec:
    return QuerySpec(0, FeatureVector(1.0, 1.0, 1.0), runtimes, t_sla)


def test_closest_to_target_ties_to_smaller():
    assert closest_to_target({4: 8.0, 6: 12.0}, 10.0) == 4
    assert closest_to_target({6: 12.0, 4: 8.0}, 10.0) == 4
    assert closest_to_target({4: 20.0, 6: 11.0, 8: 9.5}, 10.0) == 8
    with pytest.raises(ValueError):
        closest_to_target({}, 1.0)
    with pytest.raises(ValueError):
        closest_to_target({4: 1.0}, 0.0)


def test_oracle_picks_runtime_closest_to_sla():
    q = query({4: 30.0, 6: 21.0, 8: 16.0, 10: 13.0, 12: 11.0}, t_sla=15.0)
    assert oracle_choose(q, 15.0, CONFIGS.sizes) == 8
    # allt för långsamt -> största
    assert oracle_choose(q, 1.0, CONFIGS.sizes) == 12
    # allt överbetjänat -> minsta
    assert oracle_choose(q, 1000.0, CONFIGS.sizes) == 4
    assert OraclePolicy(CONFIGS).choose_before(q, 15.0, 4) == 8


def test_random_is_uniform_chi_square():
    rng = np.random.default_rng(0)
    n = 5000
    counts = Counter(random_choose(CONFIGS.sizes, rng) for _ in range(n))
    expected = n / len(CONFIGS)
    chi2 = sum((counts[c] - expected) ** 2 / expected for c in CONFIGS)
    # df = 4, p = 0.001
    assert chi2 < 18.47
    assert set(counts) == set(CONFIGS)


def test_random_policy_seeded():
    q = query({c: 1.0 for c in CONFIGS})
    a = [RandomPolicy(CONFIGS, seed=3).choose_before(q, 1.0, 4) for _ in range(1)]
    p1, p2 = RandomPolicy(CONFIGS, seed=3), RandomPolicy(CONFIGS, seed=3)
    seq1 = [p1.choose_before(q, 1.0, 4) for _ in range(20)]
    seq2 = [p2.choose_before(q, 1.0, 4) for _ in range(20)]
    assert seq1 == seq2
    assert seq1[0] == a[0]


def test_factory_builds_every_policy():
    from elastic_scaler.policies.oml import PerceptronModel

    model = PerceptronModel.from_weights([0.0] * 5)
    for name in POLICY_NAMES:
        policy = make_policy(name, CONFIGS, {}, model=model)
        assert policy.name == name
        assert isinstance(policy, ScalingPolicy)


def test_factory_errors():
    with pytest.raises(ConfigurationError):
        make_policy("pid", CONFIGS)
    with pytest.raises(ConfigurationError):
        make_policy("oml", CONFIGS)
    with pytest.raises(ConfigurationError):
        make_policy("rl", CONFIGS, {"alpha": 0.1, "beta": 0.2})
    with pytest.raises(ConfigurationError):
        make_policy("pi", CONFIGS, {"k_p": "mycket"})
