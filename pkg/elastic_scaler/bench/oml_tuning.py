"""Inlärningstakt och cache-robusthet för perceptronen.

learning_rate_sweep: för varje takt startar vi från offlinemodellen, matar in
testfrågorna en i taget (en SGD-uppdatering per fråga) och mäter relativ RMSE på
holdout efter varje uppdatering. Medel först över kontrollpunkterna i en
testmängd, sedan över testmängderna.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from elastic_scaler.core.types import TrainingRow
from elastic_scaler.policies.oml import (
    PerceptronModel,
    oml_feedback,
    oml_train_offline,
    relative_rmse,
    relative_rmse_design,
    rows_design,
)
from elastic_scaler.workloads.corpus import gen_training_corpus
from elastic_scaler.workloads.generator import FeatureRanges, RuntimeCoefficients

logger = logging.getLogger(__name__)

DEFAULT_RATES = (0.0, 0.005, 0.01, 0.02, 0.03, 0.04, 0.05, 0.07, 0.1, 0.2, 0.4, 0.8)


def _check_disjoint(test_sets: Sequence[Sequence[TrainingRow]],
                    holdouts: Sequence[Sequence[TrainingRow]]) -> None:
    if not test_sets or not holdouts:
        raise ValueError("test- och holdoutmängder får inte vara tomma")
    if len(test_sets) != len(holdouts):
        raise ValueError("lika många test- och holdoutmängder krävs")
    for test, hold in zip(test_sets, holdouts):
        if not test or not hold:
            raise ValueError("test- och holdoutmängder får inte vara tomma")
        if set(test) & set(hold):
            raise ValueError("test- och holdoutmängder måste vara disjunkta")


def adaptation_curve(model: PerceptronModel, test: Sequence[TrainingRow],
                     holdout: Sequence[TrainingRow], rate: float) -> list[float]:
    """Holdout-fel efter varje återkopplad testfråga (modellen kopieras)."""
    m = model.copy()
    m.eta = rate
    x, y = rows_design(m, holdout)
    out = []
    for row in test:
        oml_feedback(m, row.features, row.config, row.runtime)
        out.append(relative_rmse_design(m, x, y))
    return out


def learning_rate_sweep(model: PerceptronModel, test_sets: Sequence[Sequence[TrainingRow]],
                        holdouts: Sequence[Sequence[TrainingRow]],
                        rates: Sequence[float] = DEFAULT_RATES) -> list[tuple[float, float]]:
    _check_disjoint(test_sets, holdouts)
    if not rates:
        raise ValueError("inga inlärningstakter")
    curve = []
    for rate in rates:
        per_set = [
            math.fsum(c) / len(c)
            for c in (adaptation_curve(model, t, h, rate) for t, h in zip(test_sets, holdouts))
        ]
        err = math.fsum(per_set) / len(per_set)
        if not math.isfinite(err):
            err = math.inf
        curve.append((float(rate), err))
        logger.info("Takt %.4f: medel relativ RMSE %.4f", rate, err)
    return curve


@dataclass(frozen=True)
class CurveSummary:
    best_rate: float
    best_error: float
    interior_minimum: bool
    flat_valley: bool

    def as_dict(self) -> dict:
        return {
            "best_rate": self.best_rate,
            "best_error": self.best_error,
            "interior_minimum": self.interior_minimum,
            "flat_valley": self.flat_valley,
        }


def summarize_curve(curve: Sequence[tuple[float, float]], band: float = 0.5,
                    tolerance: float = 0.10) -> CurveSummary:
    """Argmin, om minimum ligger inuti griden, och om dalen är platt:
    alla takter inom +-band av argmin ligger inom tolerance av minimum."""
    if not curve:
        raise ValueError("tom kurva")
    ordered = sorted(curve)
    i = min(range(len(ordered)), key=lambda k: (ordered[k][1], k))
    best_rate, best_err = ordered[i]
    lo, hi = best_rate * (1 - band), best_rate * (1 + band)
    near = [e for r, e in ordered if lo <= r <= hi]
    flat = all(e <= best_err * (1 + tolerance) for e in near)
    return CurveSummary(best_rate, best_err, 0 < i < len(ordered) - 1, flat)


@dataclass(frozen=True)
class TuningSets:
    training: list[TrainingRow]
    test_sets: list[list[TrainingRow]]
    holdouts: list[list[TrainingRow]]


def build_tuning_sets(seed: int = 0, corpus_size: int = 6120, n_sets: int = 3,
                      test_size: int = 100, holdout_size: int = 400,
                      configs: Sequence[int] = (4, 6, 8, 10, 12),
                      train_coeffs: RuntimeCoefficients = RuntimeCoefficients(),
                      test_coeffs: RuntimeCoefficients | None = None,
                      ranges: FeatureRanges = FeatureRanges(),
                      noise_sigma: float = 0.0) -> TuningSets:
    """Träning på ett system, test och holdout på ett (ev. förskjutet) annat system.

    noise_sigma > 0 ger uppmätta körtider i testsystemet: log-normalt brus på
    både återkopplingen och holdout. Träningskorpusen är alltid brusfri.
    """
    if noise_sigma < 0:
        raise ValueError("noise_sigma får inte vara negativ")
    training = gen_training_corpus(corpus_size, seed, configs, train_coeffs, ranges)
    block = test_size + holdout_size
    rows = gen_training_corpus(n_sets * block, seed + 1, configs,
                               test_coeffs or train_coeffs, ranges)
    if noise_sigma > 0:
        rng = np.random.default_rng([seed, 2])
        rows = [TrainingRow(r.features, r.config, r.runtime * float(rng.lognormal(0.0, noise_sigma)))
                for r in rows]
    test_sets = [rows[k * block: k * block + test_size] for k in range(n_sets)]
    holdouts = [rows[k * block + test_size: (k + 1) * block] for k in range(n_sets)]
    return TuningSets(training, test_sets, holdouts)


def _scaled(rows: Sequence[TrainingRow], factor: float) -> list[TrainingRow]:
    return [TrainingRow(r.features, r.config, r.runtime * factor) for r in rows]


@dataclass(frozen=True)
class CacheRobustness:
    initial: dict[str, dict[str, float]]      # träning -> testregim -> fel före återkoppling
    final: dict[str, dict[str, float]]        # ... efter återkoppling
    curves: dict[str, dict[str, list[float]]]

    def as_dict(self) -> dict:
        return {"initial": self.initial, "final": self.final}


def cache_robustness_eval(models: Mapping[str, PerceptronModel], test: Sequence[TrainingRow],
                          holdout: Sequence[TrainingRow], regimes: Mapping[str, float],
                          rate: float = 0.04) -> CacheRobustness:
    """Varje tränad modell mot varje körtidsregim (faktor på kalla körtider)."""
    _check_disjoint([test], [holdout])
    initial: dict[str, dict[str, float]] = {}
    final: dict[str, dict[str, float]] = {}
    curves: dict[str, dict[str, list[float]]] = {}
    for train_name, model in models.items():
        initial[train_name], final[train_name], curves[train_name] = {}, {}, {}
        for regime, factor in regimes.items():
            t, h = _scaled(test, factor), _scaled(holdout, factor)
            curve = adaptation_curve(model, t, h, rate)
            initial[train_name][regime] = relative_rmse(model, h)
            final[train_name][regime] = curve[-1]
            curves[train_name][regime] = curve
    return CacheRobustness(initial, final, curves)


def train_regime_models(corpus: Sequence[TrainingRow], factors: Mapping[str, float],
                        eta: float = 0.04, epochs: int = 1) -> dict[str, PerceptronModel]:
    """En offlinemodell per träningsregim (t.ex. cold 1.0, warm 0.7)."""
    return {
        name: oml_train_offline(PerceptronModel(eta=eta), _scaled(corpus, factor), epochs)
        for name, factor in factors.items()
    }
