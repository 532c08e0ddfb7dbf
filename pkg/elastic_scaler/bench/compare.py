"""Makrojämförelse över en arbetslastsvit.

  1. overfit-sökning för PI och RL per arbetslast
  2. medelparametrar över arbetslasterna
  3. Oracle / Random / PI / RL / OML med medelparametrarna (OML med fast eta)
"""
from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from elastic_scaler.bench.runner import PolicySpec, SimEnv, run_session, summarize_trace
from elastic_scaler.bench.sweep import SweepGrid, SweepResult, average_parameters, overfit_search
from elastic_scaler.core.types import ConfigSet, SessionTrace
from elastic_scaler.policies.oml import PerceptronModel
from elastic_scaler.workloads.generator import WorkloadSpec

logger = logging.getLogger(__name__)

COMPARED = ("oracle", "random", "pi", "rl", "oml")


@dataclass(frozen=True)
class PolicyRun:
    workload: str
    policy: str
    pr: float
    cs: float
    rel_std: float

    @property
    def run_name(self) -> str:
        return f"{self.workload}/{self.policy}"


@dataclass
class Comparison:
    pi_params: dict[str, float]
    rl_params: dict[str, float]
    runs: list[PolicyRun] = field(default_factory=list)
    traces: dict[str, SessionTrace] = field(default_factory=dict)
    sweeps: list[SweepResult] = field(default_factory=list)

    def run(self, workload: str, policy: str) -> PolicyRun:
        for r in self.runs:
            if r.workload == workload and r.policy == policy:
                return r
        raise KeyError(f"{workload}/{policy}")

    @property
    def workloads(self) -> list[str]:
        return list(dict.fromkeys(r.workload for r in self.runs))

    def oml_tighter_count(self) -> int:
        """Antal arbetslaster där OML:s relativa std <= både PI:s och RL:s."""
        return sum(
            1 for w in self.workloads
            if self.run(w, "oml").rel_std <= min(self.run(w, "pi").rel_std,
                                                 self.run(w, "rl").rel_std)
        )

    def oml_closer_than_pi_count(self) -> int:
        count = 0
        for w in self.workloads:
            oracle = self.run(w, "oracle").pr
            if abs(self.run(w, "oml").pr - oracle) <= abs(self.run(w, "pi").pr - oracle):
                count += 1
        return count

    def summary(self) -> dict:
        return {
            "pi_params": self.pi_params,
            "rl_params": self.rl_params,
            "workloads": len(self.workloads),
            "oml_tighter_than_pi_and_rl": self.oml_tighter_count(),
            "oml_closer_to_oracle_than_pi": self.oml_closer_than_pi_count(),
        }


def compare_policies(workloads: Sequence[WorkloadSpec], config_set: ConfigSet,
                     model: PerceptronModel, pi_grid: SweepGrid, rl_grid: SweepGrid,
                     env: SimEnv = SimEnv(), oml_eta: float = 0.04, random_seed: int = 0,
                     threads: int = 1) -> Comparison:
    if not workloads:
        raise ValueError("inga arbetslaster att jämföra")

    oracle_traces = {w.name: run_session(PolicySpec("oracle"), w, config_set, env) for w in workloads}
    oracle_pr = {name: summarize_trace(t, env).pr for name, t in oracle_traces.items()}

    sweeps: list[SweepResult] = []
    for family, grid in (("pi", pi_grid), ("rl", rl_grid)):
        for w in workloads:
            sweeps.append(overfit_search(family, w, grid, config_set, env, threads,
                                         oracle_pr=oracle_pr[w.name]))
    pi_params = average_parameters([s for s in sweeps if s.family == "pi"])
    rl_params = average_parameters([s for s in sweeps if s.family == "rl"])
    logger.info("Medelparametrar: PI %s, RL %s", pi_params, rl_params)

    specs = {
        "random": PolicySpec("random", {"seed": random_seed}),
        "pi": PolicySpec("pi", pi_params),
        "rl": PolicySpec("rl", rl_params),
        "oml": PolicySpec("oml", {"eta": oml_eta}, model),
    }
    result = Comparison(pi_params, rl_params, sweeps=sweeps)
    for w in workloads:
        traces = {"oracle": oracle_traces[w.name]}
        traces.update({name: run_session(spec, w, config_set, env) for name, spec in specs.items()})
        for name in COMPARED:
            s = summarize_trace(traces[name], env)
            run = PolicyRun(w.name, name, s.pr, s.cs, s.rel_std)
            result.runs.append(run)
            result.traces[run.run_name] = traces[name]
    logger.info("Jämförelse klar: %s", result.summary())
    return result
