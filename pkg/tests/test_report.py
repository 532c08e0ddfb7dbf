"""Tester för rapportkatalogen."""
from __future__ import annotations

import csv
import json

from elastic_scaler.bench.report import emit_report, read_report_traces
from elastic_scaler.bench.runner import PolicySpec, run_session
from elastic_scaler.bench.sweep import SweepGrid, overfit_search
from elastic_scaler.core.types import ConfigSet, SessionTrace
from elastic_scaler.workloads.micro import gen_micro_w1

CONFIGS = ConfigSet((4, 6, 8, 10, 12), 4)


def traces():
    w1 = gen_micro_w1(CONFIGS.sizes, seed=0, block_len=4)
    return {
        "micro-w1/oracle": run_session(PolicySpec("oracle"), w1, CONFIGS),
        "micro-w1/pi": run_session(PolicySpec("pi", {"k_p": 100}), w1, CONFIGS),
    }


def test_report_files_and_contents(tmp_path):
    paths = emit_report(tmp_path, "exp", traces())
    assert set(paths) == {"trace", "summary", "percentiles", "scatter"}
    summary = json.loads(paths["summary"].read_text(encoding="utf-8"))
    assert summary["experiment"] == "exp"
    oracle = summary["runs"]["micro-w1/oracle"]
    assert oracle["n"] == 20
    assert set(oracle["violations"]) == {"1.0", "1.7", "2.0"}
    assert set(oracle["ratios"]["percentiles"]) == {"75", "80", "85", "90"}

    with open(paths["percentiles"], encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["run"] for r in rows] == ["micro-w1/oracle", "micro-w1/pi"]
    assert "viol_w1.7" in rows[0]


def test_report_is_byte_identical(tmp_path):
    a = emit_report(tmp_path, "a", traces())
    b = emit_report(tmp_path, "b", traces())
    for key in ("trace", "percentiles", "scatter"):
        assert a[key].read_bytes() == b[key].read_bytes()
    sa = json.loads(a["summary"].read_text(encoding="utf-8"))
    sb = json.loads(b["summary"].read_text(encoding="utf-8"))
    assert sa["runs"] == sb["runs"]


def test_traces_read_back(tmp_path):
    original = traces()
    paths = emit_report(tmp_path, "exp", original)
    back = read_report_traces(paths["trace"], CONFIGS)
    assert set(back) == set(original)
    for name, t in original.items():
        assert back[name].entries == t.entries


def test_empty_run_and_sweep_file(tmp_path):
    w1 = gen_micro_w1(CONFIGS.sizes, seed=0, block_len=2)
    sweep = overfit_search("pi", w1, SweepGrid.pi((0.0, 10.0, 2), (0.0, 0.0, 1), (1, 1, 1)),
                           CONFIGS)
    runs = {"tom": SessionTrace((), CONFIGS), **traces()}
    paths = emit_report(tmp_path, "exp", runs, sweeps=[sweep], extra={"note": "x"})
    summary = json.loads(paths["summary"].read_text(encoding="utf-8"))
    assert summary["runs"]["tom"] == {"n": 0}
    assert summary["note"] == "x"
    with open(paths["scatter"], encoding="utf-8") as fh:
        assert "tom" not in {r["run"] for r in csv.DictReader(fh)}
    with open(paths["sweep"], encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2
    assert sum(int(r["is_best"]) for r in rows) == 1
