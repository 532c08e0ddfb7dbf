"""Perceptron för körtidsprediktion (proaktiv policy).

Designrad per (fråga, storlek c):
    [est_max_cost / c, est_rows * est_width, est_width, c]  -> min-max-normaliserad + bias

Normaliseringen anpassas en gång vid offlineträningen och fryses sedan.
Uppdatering (SGD på kvadratfel):  w <- w + eta * (t - y_hat) * x
Prediktioner klampas nedåt till epsilon så att kvoter alltid är definierade.
"""
from __future__ import annotations

import copy
import json
import logging
import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from elastic_scaler.core.types import ConfigSet, FeatureVector, QuerySpec, TraceEntry, TrainingRow
from elastic_scaler.errors import ModelNotTrainedError
from elastic_scaler.policies.base import BasePolicy, closest_to_target

logger = logging.getLogger(__name__)

N_FEATURES = 4
DEFAULT_ETA = 0.04
DEFAULT_EPSILON = 0.001


def raw_design_row(features: FeatureVector, c: int) -> np.ndarray:
    if c < 1:
        raise ValueError(f"antal workers måste vara >= 1: {c}")
    return np.array([
        features.est_max_cost / c,
        features.est_rows * features.est_width,
        features.est_width,
        float(c),
    ])


@dataclass
class PerceptronModel:
    eta: float = DEFAULT_ETA
    epsilon: float = DEFAULT_EPSILON
    weights: np.ndarray = field(default_factory=lambda: np.zeros(N_FEATURES + 1))
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None
    trained: bool = False

    def __post_init__(self) -> None:
        if self.eta < 0:
            raise ValueError(f"inlärningstakten får inte vara negativ: {self.eta}")
        if self.epsilon <= 0:
            raise ValueError("epsilon måste vara > 0")
        self.weights = np.asarray(self.weights, dtype=float)

    @classmethod
    def from_weights(cls, weights: Sequence[float], lo: Sequence[float] | None = None,
                     hi: Sequence[float] | None = None, eta: float = DEFAULT_ETA) -> "PerceptronModel":
        return cls(
            eta=eta,
            weights=np.asarray(weights, dtype=float),
            lo=np.zeros(N_FEATURES) if lo is None else np.asarray(lo, dtype=float),
            hi=np.ones(N_FEATURES) if hi is None else np.asarray(hi, dtype=float),
            trained=True,
        )

    def copy(self) -> "PerceptronModel":
        return copy.deepcopy(self)

    def fit_normalizer(self, raw: np.ndarray) -> None:
        self.lo = raw.min(axis=0)
        self.hi = raw.max(axis=0)

    def normalize(self, raw: np.ndarray) -> np.ndarray:
        span = self.hi - self.lo
        span = np.where(span > 0, span, 1.0)
        scaled = (raw - self.lo) / span
        bias = np.ones(scaled.shape[:-1] + (1,))
        return np.concatenate([scaled, bias], axis=-1)

    def design(self, features: FeatureVector, configs: Iterable[int]) -> np.ndarray:
        return self.normalize(np.stack([raw_design_row(features, c) for c in configs]))

    def _require_trained(self) -> None:
        if not self.trained or self.lo is None:
            raise ModelNotTrainedError("perceptronmodellen är inte tränad")

    def as_dict(self) -> dict:
        self._require_trained()
        return {
            "eta": self.eta,
            "epsilon": self.epsilon,
            "weights": self.weights.tolist(),
            "lo": self.lo.tolist(),
            "hi": self.hi.tolist(),
        }


def _rows_matrix(rows: Sequence[TrainingRow]) -> tuple[np.ndarray, np.ndarray]:
    raw = np.stack([raw_design_row(r.features, r.config) for r in rows])
    y = np.array([r.runtime for r in rows], dtype=float)
    return raw, y


def oml_train_offline(model: PerceptronModel, rows: Sequence[TrainingRow],
                      epochs: int = 1) -> PerceptronModel:
    if not rows:
        raise ValueError("träningsmängden är tom")
    if epochs < 1:
        raise ValueError(f"epochs måste vara >= 1: {epochs}")
    raw, y = _rows_matrix(rows)
    model.fit_normalizer(raw)
    x = model.normalize(raw)
    w = model.weights.copy()
    for _ in range(epochs):
        for i in range(len(y)):
            w += model.eta * (y[i] - x[i] @ w) * x[i]
    model.weights = w
    model.trained = True
    logger.info("Perceptron tränad: %d rader, %d epoker, eta=%s", len(y), epochs, model.eta)
    return model


def oml_predict(model: PerceptronModel, features: FeatureVector, config: int) -> float:
    return oml_predict_all(model, features, (config,))[config]


def oml_predict_all(model: PerceptronModel, features: FeatureVector,
                    configs: Iterable[int]) -> dict[int, float]:
    """Prediktion för alla storlekar i ett vektoriserat steg (modellen läses, ändras ej)."""
    model._require_trained()
    sizes = list(configs)
    scores = model.design(features, sizes) @ model.weights
    return {c: float(max(s, model.epsilon)) for c, s in zip(sizes, scores)}


def oml_choose(model: PerceptronModel, features: FeatureVector, t_sla: float,
               configs: Iterable[int]) -> int:
    return closest_to_target(oml_predict_all(model, features, configs), t_sla)


def oml_feedback(model: PerceptronModel, features: FeatureVector, config: int,
                 t_real: float) -> PerceptronModel:
    model._require_trained()
    x = model.design(features, (config,))[0]
    model.weights = model.weights + model.eta * (t_real - x @ model.weights) * x
    return model


def rows_design(model: PerceptronModel, rows: Sequence[TrainingRow]) -> tuple[np.ndarray, np.ndarray]:
    """Normaliserad designmatris och faktiska körtider för en mängd rader."""
    model._require_trained()
    raw, y = _rows_matrix(rows)
    return model.normalize(raw), y


def relative_rmse_design(model: PerceptronModel, x: np.ndarray, y: np.ndarray) -> float:
    pred = np.maximum(x @ model.weights, model.epsilon)
    return float(np.sqrt(np.mean((pred - y) ** 2)) / np.mean(y))


def relative_rmse(model: PerceptronModel, rows: Sequence[TrainingRow]) -> float:
    """RMSE / medel av faktiska körtider."""
    if not rows:
        raise ValueError("utvärderingsmängden är tom")
    return relative_rmse_design(model, *rows_design(model, rows))


def save_model(model: PerceptronModel, path: str | os.PathLike[str]) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(model.as_dict(), indent=2, sort_keys=True), encoding="utf-8")
    return p


def load_model(path: str | os.PathLike[str]) -> PerceptronModel:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        model = PerceptronModel.from_weights(data["weights"], data["lo"], data["hi"],
                                             eta=float(data["eta"]))
    except KeyError as e:
        raise ValueError(f"modellfilen {path} saknar fält {e}") from None
    model.epsilon = float(data.get("epsilon", DEFAULT_EPSILON))
    if model.weights.shape != (N_FEATURES + 1,):
        raise ValueError(f"modellfilen {path} har fel antal vikter")
    return model


class OmlPolicy(BasePolicy):
    name = "oml"
    proactive = True

    def __init__(self, config_set: ConfigSet, model: PerceptronModel,
                 eta: float | None = None, feedback: bool = True):
        super().__init__(config_set)
        self.model = model.copy()
        if eta is not None:
            self.model.eta = float(eta)
        self.feedback = feedback

    def choose_before(self, query: QuerySpec, t_sla: float, current: int) -> int | None:
        return oml_choose(self.model, query.features, t_sla, self.config_set.sizes)

    def observe_after(self, entry: TraceEntry, query: QuerySpec) -> int | None:
        if self.feedback:
            oml_feedback(self.model, query.features, entry.chosen_config, entry.t_real)
        return None
