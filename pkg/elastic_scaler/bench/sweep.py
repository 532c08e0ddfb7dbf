"""Overfit-sökning: uttömmande parametergrid mot Oracle-referensen.

Varje gridpunkt kör en egen, isolerad session -> punkterna körs parallellt
(ThreadPoolExecutor, tak från PERF_SIM_THREADS / bench.threads). executor.map
bevarar ordningen, så resultatet är oberoende av trådantalet.

Bästa punkt = argmin |PR - PR_oracle|, lika -> lägre CS, sedan gridordning.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np

from elastic_scaler.bench.runner import PolicySpec, SimEnv, run_session, summarize_trace
from elastic_scaler.core.types import ConfigSet
from elastic_scaler.errors import ConfigurationError
from elastic_scaler.workloads.generator import WorkloadSpec

logger = logging.getLogger(__name__)

FAMILIES = ("pi", "rl")


def _axis(lo: float, hi: float, points: int, integer: bool = False) -> tuple[float, ...]:
    if points < 1:
        raise ConfigurationError(f"antal punkter per axel måste vara >= 1: {points}")
    if hi < lo:
        raise ConfigurationError(f"ogiltigt intervall [{lo}, {hi}]")
    values = np.linspace(lo, hi, points) if points > 1 else np.array([lo])
    if integer:
        return tuple(sorted({int(round(v)) for v in values}))
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class SweepGrid:
    family: str
    axes: tuple[tuple[str, tuple[float, ...]], ...]

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ConfigurationError(f"okänd policyfamilj för sweep: {self.family}")
        if not self.axes or any(not values for _, values in self.axes):
            raise ConfigurationError("griden får inte vara tom")
        axes = dict(self.axes)
        if self.family == "pi" and any(w < 1 for w in axes.get("w", (1,))):
            raise ConfigurationError("w måste vara >= 1")
        if self.family == "rl":
            if any(not 0 < a <= 1 for a in axes.get("alpha", ())):
                raise ConfigurationError("alpha måste ligga i (0, 1]")
            if any(d <= 1 for d in axes.get("d", ())):
                raise ConfigurationError("d måste vara > 1 (beta < alpha)")

    @classmethod
    def pi(cls, k_p: tuple[float, float, int] = (0.0, 100.0, 20),
           k_i: tuple[float, float, int] = (0.0, 100.0, 20),
           w: tuple[float, float, int] = (1, 100, 20)) -> "SweepGrid":
        return cls("pi", (("k_p", _axis(*k_p)), ("k_i", _axis(*k_i)),
                          ("w", _axis(*w, integer=True))))

    @classmethod
    def rl(cls, alpha: tuple[float, float, int] = (0.05, 1.0, 20),
           d: tuple[float, float, int] = (2, 100, 20)) -> "SweepGrid":
        return cls("rl", (("alpha", _axis(*alpha)), ("d", _axis(*d, integer=True))))

    @classmethod
    def single(cls, family: str, params: Mapping[str, float]) -> "SweepGrid":
        return cls(family, tuple((k, (v,)) for k, v in params.items()))

    @classmethod
    def from_config(cls, cfg, family: str) -> "SweepGrid":
        section = cfg.section("bench").get(family) or {}

        def spec(name: str, default: tuple[float, float, int]) -> tuple[float, float, int]:
            lo, hi, points = section.get(name, default)
            return float(lo), float(hi), int(points)

        if family == "pi":
            return cls.pi(spec("k_p", (0.0, 100.0, 20)), spec("k_i", (0.0, 100.0, 20)),
                          spec("w", (1, 100, 20)))
        if family == "rl":
            return cls.rl(spec("alpha", (0.05, 1.0, 20)), spec("d", (2, 100, 20)))
        raise ConfigurationError(f"okänd policyfamilj för sweep: {family}")

    def points(self) -> list[dict[str, float]]:
        names = [n for n, _ in self.axes]
        out = []
        for combo in itertools.product(*(values for _, values in self.axes)):
            params = dict(zip(names, combo))
            if self.family == "rl" and "d" in params:
                params["beta"] = params["alpha"] / params["d"]
            if "w" in params:
                params["w"] = int(params["w"])
            out.append(params)
        return out

    def __len__(self) -> int:
        return math.prod(len(values) for _, values in self.axes)


@dataclass(frozen=True)
class SweepPoint:
    params: dict[str, Any]
    pr: float
    cs: float
    rel_std: float

    def as_dict(self) -> dict:
        return {**self.params, "pr": self.pr, "cs": self.cs, "rel_std": self.rel_std}


@dataclass(frozen=True)
class SweepResult:
    family: str
    workload: str
    points: tuple[SweepPoint, ...]
    best_index: int
    oracle_pr: float

    @property
    def best(self) -> SweepPoint:
        return self.points[self.best_index]

    def distance(self, point: SweepPoint) -> float:
        return abs(point.pr - self.oracle_pr)


def best_index(points: Sequence[SweepPoint], oracle_pr: float) -> int:
    if not points:
        raise ValueError("inga gridpunkter")
    return min(range(len(points)),
               key=lambda i: (abs(points[i].pr - oracle_pr), points[i].cs, i))


def _evaluate(spec: PolicySpec, workload: WorkloadSpec, config_set: ConfigSet,
              env: SimEnv) -> SweepPoint:
    summary = summarize_trace(run_session(spec, workload, config_set, env), env)
    return SweepPoint(dict(spec.params), summary.pr, summary.cs, summary.rel_std)


def overfit_search(family: str, workload: WorkloadSpec, grid: SweepGrid, config_set: ConfigSet,
                   env: SimEnv = SimEnv(), threads: int = 1,
                   oracle_pr: float | None = None) -> SweepResult:
    if grid.family != family:
        raise ConfigurationError(f"griden gäller {grid.family}, inte {family}")
    if oracle_pr is None:
        oracle_pr = _evaluate(PolicySpec("oracle"), workload, config_set, env).pr

    specs = [PolicySpec(family, params) for params in grid.points()]
    logger.info("Sweep %s på %s: %d punkter, %d trådar", family, workload.name, len(specs), threads)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            points = list(pool.map(lambda s: _evaluate(s, workload, config_set, env), specs))
    else:
        points = [_evaluate(s, workload, config_set, env) for s in specs]

    idx = best_index(points, oracle_pr)
    logger.info("Bästa %s-punkt på %s: %s (PR=%.4f, oracle=%.4f)",
                family, workload.name, points[idx].params, points[idx].pr, oracle_pr)
    return SweepResult(family, workload.name, tuple(points), idx, oracle_pr)


def average_parameters(results: Sequence[SweepResult]) -> dict[str, float]:
    """Medel per parameter över arbetslasternas bästa punkter (w avrundas till heltal)."""
    if not results:
        raise ValueError("inga sweep-resultat att medla")
    keys = sorted({k for r in results for k in r.best.params})
    out: dict[str, float] = {}
    for k in keys:
        values = [float(r.best.params[k]) for r in results if k in r.best.params]
        out[k] = math.fsum(values) / len(values)
    if "w" in out:
        out["w"] = max(1, int(round(out["w"])))
    return out
