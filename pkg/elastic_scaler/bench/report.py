"""Rapportkatalog: reports/<experiment>/

  trace.csv        run + kärnans spårkolumner, en rad per fråga
  summary.json     statistik per run (sorterade nycklar, inga tidsstämplar)
  percentiles.csv  kvotpercentiler 75/80/85/90 + andel SLA-brott vid w = 1, 1.7, 2
  scatter.csv      PR / CS / relativ std per run
  sweep.csv        alla gridpunkter (bara om sweep-resultat skickas in)

Samma indata ger byte-identiska filer.
"""
from __future__ import annotations

import csv
import json
import logging
import os
from collections import defaultdict
from collections.abc import Mapping, Sequence
from pathlib import Path

from elastic_scaler.bench.runner import SimEnv, summarize_trace
from elastic_scaler.bench.sweep import SweepResult
from elastic_scaler.core.metrics import TABLE_PERCENTILES, ratio_stats, sla_violation_fraction
from elastic_scaler.core.traceio import COLUMNS, entry_from_row, entry_row
from elastic_scaler.core.types import ConfigSet, SessionTrace

logger = logging.getLogger(__name__)

VIOLATION_WEIGHTS = (1.0, 1.7, 2.0)


def write_csv(path: Path, fieldnames: Sequence[str], rows: Sequence[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(fieldnames), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def _run_stats(trace: SessionTrace, env: SimEnv) -> dict:
    if len(trace) == 0:
        return {"n": 0}
    s = summarize_trace(trace, env)
    return {
        **s.as_dict(),
        "ratios": ratio_stats(trace).as_dict(),
        "violations": {str(w): sla_violation_fraction(trace, w) for w in VIOLATION_WEIGHTS},
        "transitions": len(trace.transitions),
    }


def emit_report(out_root: str | os.PathLike[str], experiment: str,
                traces: Mapping[str, SessionTrace], env: SimEnv = SimEnv(),
                sweeps: Sequence[SweepResult] = (), extra: Mapping | None = None) -> dict[str, Path]:
    out = Path(out_root) / experiment
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    trace_rows = [{"run": name, **entry_row(e)} for name, t in traces.items() for e in t.entries]
    paths["trace"] = out / "trace.csv"
    write_csv(paths["trace"], ("run", *COLUMNS), trace_rows)

    stats = {name: _run_stats(t, env) for name, t in traces.items()}
    summary = {"experiment": experiment, "runs": stats, **(extra or {})}
    paths["summary"] = out / "summary.json"
    paths["summary"].write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n",
                                encoding="utf-8")

    pct_fields = ["run", *(f"p{p}" for p in TABLE_PERCENTILES),
                  *(f"viol_w{w}" for w in VIOLATION_WEIGHTS)]
    pct_rows, scatter_rows = [], []
    for name, s in stats.items():
        if s["n"] == 0:
            continue
        pct_rows.append({
            "run": name,
            **{f"p{p}": s["ratios"]["percentiles"][str(p)] for p in TABLE_PERCENTILES},
            **{f"viol_w{w}": s["violations"][str(w)] for w in VIOLATION_WEIGHTS},
        })
        scatter_rows.append({"run": name, "pr": s["pr"], "cs": s["cs"], "rel_std": s["rel_std"]})
    paths["percentiles"] = out / "percentiles.csv"
    write_csv(paths["percentiles"], pct_fields, pct_rows)
    paths["scatter"] = out / "scatter.csv"
    write_csv(paths["scatter"], ("run", "pr", "cs", "rel_std"), scatter_rows)

    if sweeps:
        params = sorted({k for r in sweeps for p in r.points for k in p.params})
        rows = [
            {"family": r.family, "workload": r.workload, **p.params, "pr": p.pr, "cs": p.cs,
             "rel_std": p.rel_std, "oracle_pr": r.oracle_pr, "is_best": int(i == r.best_index)}
            for r in sweeps for i, p in enumerate(r.points)
        ]
        paths["sweep"] = out / "sweep.csv"
        write_csv(paths["sweep"], ("family", "workload", *params, "pr", "cs", "rel_std",
                                    "oracle_pr", "is_best"), rows)

    logger.info("Rapport skriven till %s (%d runs)", out, len(traces))
    return paths


def read_report_traces(path: str | os.PathLike[str], config_set: ConfigSet) -> dict[str, SessionTrace]:
    """Läs tillbaka trace.csv per run (utan byteshistorik)."""
    grouped: dict[str, list] = defaultdict(list)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            grouped[row["run"]].append(entry_from_row(row))
    return {name: SessionTrace(tuple(entries), config_set) for name, entries in grouped.items()}
