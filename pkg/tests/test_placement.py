"""Tester för mini-partitioner, omfördelningsplaner och placeringsstrategier."""
from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from elastic_scaler.placement.costs import (
    StorageProfile,
    estimate_ingest_time,
    estimate_reconfig_time,
)
from elastic_scaler.placement.layout import (
    DYNAMIC,
    SHUFFLED,
    STATIC_CHUNKS,
    STATIC_REPLICATED,
    apply_plan,
    build_uniform_layout,
    default_j,
    lcm_of,
    movement_fraction,
    plan_shuffle_resize,
)
from elastic_scaler.placement.replicated import (
    build_dynamic_layout,
    build_static_replicated,
    build_static_replicated_chunks,
    stored_bytes,
)

CONFIGS = (4, 6, 8, 10, 12)
TEN_GB = 10_000_000_000


def lower_bound_moves(counts: list[int], n_minis: int, target: int) -> int:
    """Minsta antal flyttar till någon balanserad tilldelning (uttömmande över +1-platserna)."""
    base, extra = divmod(n_minis, target)
    best = None
    for bonus in itertools.combinations(range(target), extra):
        caps = [base + (1 if w in bonus else 0) for w in range(target)]
        caps += [0] * (len(counts) - target)
        moves = sum(max(0, counts[w] - caps[w]) for w in range(len(counts)))
        best = moves if best is None else min(best, moves)
    return best


def test_default_j_divides_every_config():
    assert lcm_of(CONFIGS) == 120
    assert default_j(CONFIGS, 4) == 30
    assert default_j(CONFIGS, 12) == 10
    for c in CONFIGS:
        assert c * default_j(CONFIGS, c) == 120


def test_uniform_layout_is_balanced():
    layout = build_uniform_layout(TEN_GB, 4, 3)
    assert layout.n_minis == 12
    assert layout.counts() == [3, 3, 3, 3]
    assert layout.minis_of(1) == [3, 4, 5]
    assert layout.is_balanced()
    with pytest.raises(ValueError):
        build_uniform_layout(TEN_GB, 0, 1)


@pytest.mark.parametrize("src,dst,j", [
    (1, 2, 1), (2, 3, 1), (3, 2, 1), (3, 5, 2), (5, 3, 1), (2, 7, 3), (7, 2, 1), (4, 4, 2),
])
def test_plan_is_minimal_brute_force(src, dst, j):
    layout = build_uniform_layout(1000, src, j)
    plan = plan_shuffle_resize(layout, dst)
    assert len(plan) == lower_bound_moves(layout.counts(dst), layout.n_minis, dst)
    after = apply_plan(layout, plan)
    assert after.workers == dst
    assert after.is_balanced()


def test_all_pairs_exact_fraction():
    for src, dst in itertools.permutations(CONFIGS, 2):
        layout = build_uniform_layout(TEN_GB, src, default_j(CONFIGS, src))
        plan = plan_shuffle_resize(layout, dst)
        moved = Fraction(len(plan), layout.n_minis)
        assert moved == Fraction(max(src, dst) - min(src, dst), max(src, dst)), (src, dst)
        assert movement_fraction(plan, layout) == pytest.approx(float(moved))
        assert apply_plan(layout, plan).counts() == [layout.n_minis // dst] * dst


def test_same_size_means_no_moves():
    layout = build_uniform_layout(TEN_GB, 6, default_j(CONFIGS, 6))
    plan = plan_shuffle_resize(layout, 6)
    assert len(plan) == 0
    assert estimate_reconfig_time(plan, StorageProfile()) == 0.0


def test_scale_up_moves_to_new_workers_only():
    layout = build_uniform_layout(TEN_GB, 2, 2)
    plan = plan_shuffle_resize(layout, 4)
    assert {m.destination for m in plan.moves} == {2, 3}
    assert {m.source for m in plan.moves} == {0, 1}


def test_apply_plan_rejects_stale_plan():
    layout = build_uniform_layout(TEN_GB, 2, 2)
    plan = plan_shuffle_resize(layout, 4)
    moved = apply_plan(layout, plan)
    with pytest.raises(ValueError):
        apply_plan(moved, plan)


def test_chunks_two_and_four_workers():
    chunks = build_static_replicated_chunks((2, 4), TEN_GB, j=1)
    assert chunks.base.workers == 4
    # p_r3 -> r1, p_r4 -> r2 (1-indexerat)
    assert chunks.copy_summary(2) == [(2, 0, 1), (3, 1, 1)]
    assert chunks.readable(2) == {0: frozenset({0, 2}), 1: frozenset({1, 3})}
    assert chunks.extra_bytes == pytest.approx(TEN_GB / 2)


def test_chunks_full_config_set_cover_table_once():
    chunks = build_static_replicated_chunks(CONFIGS, TEN_GB)
    n = chunks.base.n_minis
    assert n == 120
    for c in CONFIGS:
        readable = chunks.readable(c)
        union = set().union(*readable.values())
        assert union == set(range(n))
        assert sum(len(s) for s in readable.values()) == n        # disjunkta
        assert {len(s) for s in readable.values()} == {n // c}
        assert chunks.layout_for(c).is_balanced()
    # 80 + 60 + 40 + 20 extra mini-partitioner
    assert chunks.extra_minis == 200
    assert chunks.stored_bytes < stored_bytes(build_static_replicated(CONFIGS, TEN_GB))


def test_static_replicated_one_copy_per_config():
    layouts = build_static_replicated(CONFIGS, TEN_GB)
    assert sorted(layouts) == list(CONFIGS)
    assert stored_bytes(layouts) == pytest.approx(5 * TEN_GB)
    assert all(lay.strategy == STATIC_REPLICATED and lay.is_balanced() for lay in layouts.values())
    with pytest.raises(ValueError):
        build_static_replicated((6, 4), TEN_GB)


def test_dynamic_layout_variants():
    large = build_dynamic_layout(12, 4, TEN_GB)
    assert large.variant == "dynamic_large"
    assert set(large.compute_workers).isdisjoint(set(large.data.assignment))
    assert build_dynamic_layout(4, 12).variant == "dynamic_small"
    assert build_dynamic_layout(6, 6).variant == "dynamic_balanced"
    assert large.data.strategy == DYNAMIC


def test_ingest_calibration_and_ordering():
    profile = StorageProfile(read_throughput=40e6, write_throughput=12e6)
    static = estimate_ingest_time(STATIC_REPLICATED, TEN_GB, profile, CONFIGS)
    assert static == pytest.approx(604, abs=1.0)
    shuffled = estimate_ingest_time(SHUFFLED, TEN_GB, profile, CONFIGS)
    chunks = estimate_ingest_time(STATIC_CHUNKS, TEN_GB, profile, CONFIGS)
    dynamic = estimate_ingest_time(DYNAMIC, TEN_GB, profile, CONFIGS)
    assert shuffled == pytest.approx(TEN_GB / (4 * 12e6))
    assert dynamic == pytest.approx(TEN_GB / (12 * 12e6))
    # chunkarna går lika fort som en kopia över minsta konfigurationen
    assert chunks == pytest.approx(TEN_GB / (4 * 12e6), rel=0.05)
    assert chunks == pytest.approx(shuffled, rel=0.05)
    assert dynamic < chunks < static
    assert estimate_ingest_time(SHUFFLED, 0, profile, CONFIGS) == 0.0
    with pytest.raises(ValueError):
        estimate_ingest_time("okänd", TEN_GB, profile, CONFIGS)


def test_scale_down_slower_than_scale_up_when_writes_are_slow():
    profile = StorageProfile(read_throughput=40e6, write_throughput=12e6)
    up_layout = build_uniform_layout(TEN_GB, 4, default_j(CONFIGS, 4))
    down_layout = build_uniform_layout(TEN_GB, 12, default_j(CONFIGS, 12))
    up = estimate_reconfig_time(plan_shuffle_resize(up_layout, 12), profile)
    down = estimate_reconfig_time(plan_shuffle_resize(down_layout, 4), profile)
    assert 0 < up < down
    plan = plan_shuffle_resize(up_layout, 12)
    assert estimate_reconfig_time(plan, profile, strategy=STATIC_REPLICATED) == 0.0


def test_storage_profile_validation():
    with pytest.raises(ValueError):
        StorageProfile(read_throughput=0)
    with pytest.raises(ValueError):
        StorageProfile(table_bytes=-1)
