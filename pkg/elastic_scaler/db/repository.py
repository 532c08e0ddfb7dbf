"""Skriver och läser experimentloggen."""
from __future__ import annotations

import json
import logging
from collections.abc import Sequence

from sqlalchemy import select
from sqlalchemy.orm import Session

from elastic_scaler.bench.runner import SessionSummary
from elastic_scaler.bench.sweep import SweepResult
from elastic_scaler.db.models import ExperimentRun, SweepPointRow

logger = logging.getLogger(__name__)


class RunRepository:
    def __init__(self, session: Session):
        self.session = session

    def record_run(self, experiment: str, command: str, *, policy: str | None = None,
                   workload: str | None = None, seed: int = 0,
                   summary: SessionSummary | None = None) -> ExperimentRun:
        run = ExperimentRun(
            experiment=experiment,
            command=command,
            policy=policy,
            workload=workload,
            seed=seed,
            n_queries=summary.n if summary else 0,
            pr=summary.pr if summary else None,
            cs=summary.cs if summary else None,
            rel_std=summary.rel_std if summary else None,
        )
        self.session.add(run)
        self.session.flush()
        return run

    def record_sweep(self, run: ExperimentRun, results: Sequence[SweepResult]) -> int:
        n = 0
        for r in results:
            for i, p in enumerate(r.points):
                self.session.add(SweepPointRow(
                    run_id=run.id,
                    family=r.family,
                    workload=r.workload,
                    params_json=json.dumps(p.params, sort_keys=True),
                    pr=p.pr,
                    cs=p.cs,
                    rel_std=p.rel_std,
                    is_best=i == r.best_index,
                ))
                n += 1
        self.session.flush()
        logger.info("Sparade %d sweep-punkter för run %s", n, run.id)
        return n

    def list_runs(self, experiment: str | None = None) -> list[ExperimentRun]:
        stmt = select(ExperimentRun).order_by(ExperimentRun.id)
        if experiment is not None:
            stmt = stmt.where(ExperimentRun.experiment == experiment)
        return list(self.session.scalars(stmt))

    def commit(self) -> None:
        self.session.commit()
