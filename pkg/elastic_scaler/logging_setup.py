"""Loggning till konsol och (om logging.file är satt) till fil."""
from __future__ import annotations

import logging
from pathlib import Path

from elastic_scaler.config import Config

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_configured = False


def setup_logging(cfg: Config, level: str | None = None) -> None:
    """Konfigurera rotloggern en gång per process. level vinner över LOG_LEVEL och filen."""
    global _configured
    if _configured:
        return
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    log_file = cfg.section("logging").get("file")
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))

    formatter = logging.Formatter(LOG_FORMAT, DATE_FORMAT)
    root = logging.getLogger()
    root.setLevel(getattr(logging, (level or cfg.log_level).upper(), logging.INFO))
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)
    _configured = True
