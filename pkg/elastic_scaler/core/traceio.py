"""Utbytesformat för sessionsspår: CSV och en JSON-lines-spegel med samma kolumner.

CSV-kolumner (i ordning): query_id, chosen_config, t_real, t_sla, ratio, cost.
Flyttal skrivs med repr() -> läsning ger exakt samma värden tillbaka.
Konfigurationsmängden ingår inte i raderna och skickas in vid läsning.
"""
from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

from elastic_scaler.core.types import ConfigSet, SessionTrace, TraceEntry

COLUMNS = ("query_id", "chosen_config", "t_real", "t_sla", "ratio", "cost")


def entry_row(entry: TraceEntry) -> dict:
    return {
        "query_id": entry.query_id,
        "chosen_config": entry.chosen_config,
        "t_real": entry.t_real,
        "t_sla": entry.t_sla,
        "ratio": entry.ratio,
        "cost": entry.cost,
    }


def entry_from_row(row: dict) -> TraceEntry:
    return TraceEntry(
        query_id=int(row["query_id"]),
        chosen_config=int(row["chosen_config"]),
        t_real=float(row["t_real"]),
        t_sla=float(row["t_sla"]),
        ratio=float(row["ratio"]),
        cost=float(row["cost"]),
    )


def trace_to_csv(trace: SessionTrace, extra: dict | None = None) -> str:
    """CSV-text för ett spår. extra = konstanta kolumner först (t.ex. run-namn)."""
    extra = extra or {}
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=[*extra, *COLUMNS], lineterminator="\n")
    writer.writeheader()
    for e in trace.entries:
        writer.writerow({**extra, **entry_row(e)})
    return buf.getvalue()


def write_trace_csv(trace: SessionTrace, path: str | os.PathLike[str]) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(trace_to_csv(trace), encoding="utf-8")
    return p


def read_trace_csv(path: str | os.PathLike[str], config_set: ConfigSet) -> SessionTrace:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return SessionTrace(tuple(entry_from_row(r) for r in rows), config_set)


def write_trace_jsonl(trace: SessionTrace, path: str | os.PathLike[str]) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps(entry_row(e), sort_keys=False) for e in trace.entries]
    p.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return p


def read_trace_jsonl(path: str | os.PathLike[str], config_set: ConfigSet) -> SessionTrace:
    entries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            entries.append(entry_from_row(json.loads(line)))
    return SessionTrace(tuple(entries), config_set)
