"""Arbetslastfiler: JSON-lines, en QuerySpec per rad.

  {"id": 7, "features": {...}, "true_runtime": {"4": 12.5, ...}, "t_sla": 9.0,
   "ideal_config": 8}

Nycklarna i true_runtime är konfigurationsstorlekar (strängar i JSON).
"""
from __future__ import annotations

import json
import os
from collections.abc import Iterable
from pathlib import Path

from elastic_scaler.core.types import FeatureVector, QuerySpec


def query_to_dict(q: QuerySpec) -> dict:
    return {
        "id": q.id,
        "features": q.features.as_dict(),
        "true_runtime": {str(c): t for c, t in sorted(q.true_runtime.items())},
        "t_sla": q.t_sla,
        "ideal_config": q.ideal_config,
    }


def query_from_dict(d: dict) -> QuerySpec:
    try:
        f = d["features"]
        features = FeatureVector(
            est_max_cost=float(f["est_max_cost"]),
            est_rows=float(f["est_rows"]),
            est_width=float(f["est_width"]),
            workers=int(f.get("workers", 0)),
        )
        ideal = d.get("ideal_config")
        return QuerySpec(
            id=int(d["id"]),
            features=features,
            true_runtime={int(c): float(t) for c, t in d["true_runtime"].items()},
            t_sla=float(d["t_sla"]),
            ideal_config=int(ideal) if ideal is not None else None,
        )
    except KeyError as e:
        raise ValueError(f"arbetslastrad saknar fält {e}") from None


def write_workload(queries: Iterable[QuerySpec], path: str | os.PathLike[str]) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="\n") as fh:
        for q in queries:
            fh.write(json.dumps(query_to_dict(q)) + "\n")
    return p


def read_workload(path: str | os.PathLike[str]) -> list[QuerySpec]:
    out: list[QuerySpec] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            out.append(query_from_dict(json.loads(line)))
        except (ValueError, TypeError) as e:
            raise ValueError(f"{path}:{lineno}: {e}") from None
    return out
