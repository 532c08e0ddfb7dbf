"""Bygger policyinstanser från namn + platta parametrar (k_p, k_i, w, alpha, beta, eta, seed)."""
from __future__ import annotations

from collections.abc import Mapping
from typing import Any

from elastic_scaler.core.types import ConfigSet
from elastic_scaler.errors import ConfigurationError
from elastic_scaler.policies.base import BasePolicy
from elastic_scaler.policies.oml import OmlPolicy, PerceptronModel
from elastic_scaler.policies.oracle import OraclePolicy, RandomPolicy
from elastic_scaler.policies.pi import PiPolicy
from elastic_scaler.policies.rl import RlPolicy

POLICY_NAMES = ("oracle", "random", "pi", "rl", "oml")


def make_policy(name: str, config_set: ConfigSet, params: Mapping[str, Any] | None = None,
                model: PerceptronModel | None = None) -> BasePolicy:
    p = dict(params or {})
    try:
        if name == "oracle":
            return OraclePolicy(config_set)
        if name == "random":
            return RandomPolicy(config_set, seed=int(p.get("seed", 0)))
        if name == "pi":
            return PiPolicy(config_set, k_p=float(p.get("k_p", 1.0)),
                            k_i=float(p.get("k_i", 0.0)), w=int(p.get("w", 1)))
        if name == "rl":
            return RlPolicy(config_set, alpha=float(p.get("alpha", 0.5)),
                            beta=float(p.get("beta", 0.1)))
        if name == "oml":
            if model is None:
                raise ConfigurationError("oml kräver en tränad perceptronmodell")
            eta = p.get("eta")
            return OmlPolicy(config_set, model, eta=None if eta is None else float(eta),
                             feedback=bool(p.get("feedback", True)))
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigurationError):
            raise
        raise ConfigurationError(f"ogiltiga parametrar för {name}: {e}") from e
    raise ConfigurationError(f"okänd policy: {name} (välj bland {', '.join(POLICY_NAMES)})")
