"""Undantag som paketet kastar. Alla ärver ScalerError så att CLI:t kan skilja
förväntade fel (exit 2) från buggar (exit 1)."""
from __future__ import annotations


class ScalerError(Exception):
    pass


class EmptySessionError(ScalerError, ValueError):
    """Metrik efterfrågad på en tom session."""


class ConfigurationError(ScalerError, ValueError):
    """Ogiltig klusterkonfiguration eller parameter."""


class UnknownSessionError(ScalerError, KeyError):
    pass


class SessionClosedError(ScalerError, RuntimeError):
    pass


class ModelNotTrainedError(ScalerError, RuntimeError):
    pass
