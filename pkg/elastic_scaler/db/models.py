"""SQLAlchemy-modeller för experimentloggen (SQLite lokalt, Postgres via DATABASE_URL).

Loggen är valfri: rapportfilerna beror aldrig på databasen.
"""
from __future__ import annotations

from datetime import datetime

from sqlalchemy import DateTime, Float, ForeignKey, Integer, String, Text, func
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column, relationship


class Base(DeclarativeBase):
    pass


class ExperimentRun(Base):
    __tablename__ = "experiment_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    experiment: Mapped[str] = mapped_column(String(128), index=True)
    command: Mapped[str] = mapped_column(String(32))
    policy: Mapped[str | None] = mapped_column(String(32), nullable=True)
    workload: Mapped[str | None] = mapped_column(String(128), nullable=True)
    seed: Mapped[int] = mapped_column(Integer, default=0)
    n_queries: Mapped[int] = mapped_column(Integer, default=0)
    pr: Mapped[float | None] = mapped_column(Float, nullable=True)
    cs: Mapped[float | None] = mapped_column(Float, nullable=True)
    rel_std: Mapped[float | None] = mapped_column(Float, nullable=True)
    created_at: Mapped[datetime] = mapped_column(DateTime, server_default=func.now())

    sweep_points: Mapped[list["SweepPointRow"]] = relationship(
        back_populates="run", cascade="all, delete-orphan")


class SweepPointRow(Base):
    __tablename__ = "sweep_points"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(ForeignKey("experiment_runs.id"), index=True)
    family: Mapped[str] = mapped_column(String(16))
    workload: Mapped[str] = mapped_column(String(128))
    params_json: Mapped[str] = mapped_column(Text)
    pr: Mapped[float] = mapped_column(Float)
    cs: Mapped[float] = mapped_column(Float)
    rel_std: Mapped[float] = mapped_column(Float)
    is_best: Mapped[bool] = mapped_column(default=False)

    run: Mapped[ExperimentRun] = relationship(back_populates="sweep_points")
