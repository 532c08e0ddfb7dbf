"""Engines och sessioner för experimentloggen, en engine per databas-URL."""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker

from elastic_scaler.db.models import Base

SQLITE_FILE_PREFIX = "sqlite:///"


def make_engine(url: str) -> Engine:
    """Ny engine. För SQLite-filer skapas katalogen vid behov."""
    if url.startswith(SQLITE_FILE_PREFIX):
        Path(url[len(SQLITE_FILE_PREFIX):]).parent.mkdir(parents=True, exist_ok=True)
    return create_engine(url, future=True)


@lru_cache(maxsize=None)
def engine_for(url: str) -> Engine:
    return make_engine(url)


@lru_cache(maxsize=None)
def _session_factory(url: str) -> sessionmaker[Session]:
    return sessionmaker(bind=engine_for(url), future=True, expire_on_commit=False)


def init_db(target: Engine | str) -> Engine:
    """Skapa alla tabeller om de inte finns (idempotent)."""
    engine = engine_for(target) if isinstance(target, str) else target
    Base.metadata.create_all(engine)
    return engine


def new_session(url: str) -> Session:
    return _session_factory(url)()
