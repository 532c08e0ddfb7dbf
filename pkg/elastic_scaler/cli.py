"""Kommandoradsgränssnitt.

    python -m elastic_scaler.cli simulate --policy oracle --workload micro-w1
    python -m elastic_scaler.cli sweep --family pi --workload micro-w1
    python -m elastic_scaler.cli tune-oml --save-model models/oml.json
    python -m elastic_scaler.cli placement-plan --from 2 --to 4
    python -m elastic_scaler.cli placement-plan --strategy static_replicated_chunks --configs 2,4
    python -m elastic_scaler.cli report --experiment macro

Exitkoder: 0 = allt skrivet, 2 = ogiltig indata/konfiguration, 1 = oväntat fel.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from elastic_scaler.bench.compare import compare_policies
from elastic_scaler.bench.oml_tuning import (
    build_tuning_sets,
    cache_robustness_eval,
    learning_rate_sweep,
    summarize_curve,
    train_regime_models,
)
from elastic_scaler.bench.report import emit_report, write_csv
from elastic_scaler.bench.runner import (
    PolicySpec,
    SimEnv,
    config_set_from_config,
    run_session,
    summarize_trace,
)
from elastic_scaler.bench.sweep import SweepGrid, overfit_search
from elastic_scaler.config import Config, load_config, load_params
from elastic_scaler.core.types import ConfigSet
from elastic_scaler.errors import ScalerError
from elastic_scaler.logging_setup import setup_logging
from elastic_scaler.placement.costs import (
    StorageProfile,
    estimate_ingest_time,
    estimate_reconfig_time,
)
from elastic_scaler.placement.layout import (
    SHUFFLED,
    STATIC_CHUNKS,
    STATIC_REPLICATED,
    STRATEGIES,
    build_uniform_layout,
    default_j,
    movement_fraction,
    plan_shuffle_resize,
)
from elastic_scaler.placement.replicated import (
    build_dynamic_layout,
    build_static_replicated,
    build_static_replicated_chunks,
    stored_bytes,
)
from elastic_scaler.policies.factory import POLICY_NAMES
from elastic_scaler.policies.oml import PerceptronModel, load_model, oml_train_offline, save_model
from elastic_scaler.simenv.runtime import CACHE_MODES
from elastic_scaler.simenv.workload_io import read_workload, write_workload
from elastic_scaler.workloads.corpus import gen_training_corpus
from elastic_scaler.workloads.generator import (
    FeatureRanges,
    RuntimeCoefficients,
    WorkloadSpec,
    gen_query_pool,
)
from elastic_scaler.workloads.macro import FILTERS, gen_random_workload, ten_workload_suite
from elastic_scaler.workloads.micro import gen_micro_w1, gen_micro_w2, gen_micro_w3

logger = logging.getLogger(__name__)

WORKLOADS = ("micro-w1", "micro-w2", "micro-w3", "random")


# ---- hjälpare ----

def _sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(sorted(int(s) for s in text.split(",") if s.strip()))
    except ValueError:
        raise argparse.ArgumentTypeError(f"ogiltig storlekslista: {text}") from None


def _config_set(args, cfg: Config) -> ConfigSet:
    base = config_set_from_config(cfg)
    sizes = args.configs or base.sizes
    init_c = args.init if args.init is not None else (base.init_c if base.init_c in sizes else sizes[0])
    return ConfigSet(sizes, init_c)


def _generator(cfg: Config) -> tuple[RuntimeCoefficients, FeatureRanges]:
    wl = cfg.section("workloads")
    return RuntimeCoefficients.from_dict(wl.get("runtime")), FeatureRanges.from_dict(wl.get("features"))


def _seed(args, cfg: Config) -> int:
    if args.seed is not None:
        return args.seed
    return int(cfg.section("simulation").get("seed", 0))


def _pool(cfg: Config, sizes: Sequence[int], seed: int):
    wl = cfg.section("workloads")
    coeffs, ranges = _generator(cfg)
    return gen_query_pool(int(wl.get("pool_size", 900)), seed, sizes, coeffs, ranges,
                          target_sizes=tuple(wl.get("target_sizes", (2, 4, 6, 8, 10, 12, 16))),
                          jitter=float(wl.get("sla_jitter", 0.10)))


def _workload(args, cfg: Config, configs: ConfigSet, seed: int) -> WorkloadSpec:
    if args.workload_file:
        path = Path(args.workload_file)
        return WorkloadSpec(path.stem, tuple(read_workload(path)), seed)
    wl = cfg.section("workloads")
    micro = wl.get("micro", {}) or {}
    coeffs, ranges = _generator(cfg)
    sizes = configs.sizes
    if args.workload == "micro-w1":
        return gen_micro_w1(sizes, seed, block_len=int(micro.get("block_len", 10)),
                            coeffs=coeffs, ranges=ranges)
    if args.workload == "micro-w2":
        return gen_micro_w2(sizes, seed, length=int(micro.get("w2_length", 30)),
                            outlier_at=int(micro.get("w2_outlier_at", 15)),
                            coeffs=coeffs, ranges=ranges)
    if args.workload == "micro-w3":
        return gen_micro_w3(sizes, seed, block_len=int(micro.get("block_len", 10)),
                            n_blocks=int(micro.get("w3_blocks", 4)),
                            mix_ratio=float(micro.get("w3_mix_ratio", 0.5)),
                            coeffs=coeffs, ranges=ranges)
    n = args.n or int(wl.get("n", 100))
    return gen_random_workload(n, seed, args.filter, pool=_pool(cfg, sizes, seed), configs=sizes)


def _env(args, cfg: Config, seed: int) -> SimEnv:
    env = SimEnv.from_config(cfg, seed=seed)
    if getattr(args, "cache_mode", None):
        env = dataclasses.replace(env, runtime_model=dataclasses.replace(
            env.runtime_model, cache_mode=args.cache_mode))
    if getattr(args, "strategy", None):
        env = dataclasses.replace(env, dataset=dataclasses.replace(env.dataset, strategy=args.strategy))
    return env


def _train_model(cfg: Config, sizes: Sequence[int], seed: int) -> PerceptronModel:
    oml = cfg.policy("oml")
    coeffs, ranges = _generator(cfg)
    corpus = gen_training_corpus(int(oml.get("corpus_size", 6120)), seed, sizes, coeffs, ranges)
    return oml_train_offline(PerceptronModel(eta=float(oml.get("eta", 0.04))), corpus,
                             epochs=int(oml.get("epochs", 1)))


def _model(args, cfg: Config, sizes: Sequence[int], seed: int) -> PerceptronModel:
    if getattr(args, "model", None):
        return load_model(args.model)
    return _train_model(cfg, sizes, seed)


def _policy_params(args, cfg: Config, name: str) -> dict:
    params = cfg.policy(name)
    if args.params:
        params.update(load_params(args.params))
    return params


def _out_root(args, cfg: Config) -> Path:
    return Path(args.out or cfg.section("reports").get("out_dir", "reports"))


def _record(args, cfg: Config, command: str, **kwargs) -> None:
    if not (args.record or cfg.section("storage").get("record_runs", False)):
        return
    from elastic_scaler.db.repository import RunRepository
    from elastic_scaler.db.session import init_db, new_session

    url = cfg.database_url
    init_db(url)
    sweeps = kwargs.pop("sweeps", ())
    with new_session(url) as s:
        repo = RunRepository(s)
        run = repo.record_run(args.experiment or command, command, **kwargs)
        if sweeps:
            repo.record_sweep(run, sweeps)
        repo.commit()
    logger.info("Körningen loggad i databasen (%s)", command)


# ---- kommandon ----

def cmd_simulate(args, cfg: Config) -> int:
    seed = _seed(args, cfg)
    configs = _config_set(args, cfg)
    workload = _workload(args, cfg, configs, seed)
    if args.dump_workload:
        write_workload(workload.queries, args.dump_workload)
    env = _env(args, cfg, seed)
    params = _policy_params(args, cfg, args.policy)
    model = _model(args, cfg, configs.sizes, seed) if args.policy == "oml" else None
    trace = run_session(PolicySpec(args.policy, params, model), workload, configs, env)

    run_name = f"{workload.name}/{args.policy}"
    experiment = args.experiment or f"simulate-{args.policy}-{workload.name}"
    emit_report(_out_root(args, cfg), experiment, {run_name: trace}, env)
    s = summarize_trace(trace, env)
    print(f"{run_name}: n={s.n} PR={s.pr:.4f} CS={s.cs:.4f} rel.std={s.rel_std:.4f} "
          f"byten={len(trace.transitions)}")
    _record(args, cfg, "simulate", policy=args.policy, workload=workload.name, seed=seed, summary=s)
    return 0


def cmd_sweep(args, cfg: Config) -> int:
    seed = _seed(args, cfg)
    configs = _config_set(args, cfg)
    workload = _workload(args, cfg, configs, seed)
    env = _env(args, cfg, seed)
    if args.params:
        keys = {"pi": ("k_p", "k_i", "w"), "rl": ("alpha", "beta")}[args.family]
        fixed = {k: v for k, v in load_params(args.params).items() if k in keys}
        grid = SweepGrid.single(args.family, fixed)
    else:
        grid = SweepGrid.from_config(cfg, args.family)
    result = overfit_search(args.family, workload, grid, configs, env, threads=cfg.sim_threads)

    best_trace = run_session(PolicySpec(args.family, result.best.params), workload, configs, env)
    oracle_trace = run_session(PolicySpec("oracle"), workload, configs, env)
    experiment = args.experiment or f"sweep-{args.family}-{workload.name}"
    emit_report(_out_root(args, cfg), experiment,
                {f"{workload.name}/oracle": oracle_trace,
                 f"{workload.name}/{args.family}-best": best_trace},
                env, sweeps=[result], extra={"best": result.best.as_dict(),
                                             "oracle_pr": result.oracle_pr})
    print(f"{len(result.points)} punkter, bäst: {result.best.params} "
          f"PR={result.best.pr:.4f} (oracle {result.oracle_pr:.4f})")
    _record(args, cfg, "sweep", policy=args.family, workload=workload.name, seed=seed,
            summary=summarize_trace(best_trace, env), sweeps=[result])
    return 0


def cmd_tune_oml(args, cfg: Config) -> int:
    seed = _seed(args, cfg)
    configs = _config_set(args, cfg)
    tuning = cfg.section("oml_tuning")
    oml = cfg.policy("oml")
    coeffs, ranges = _generator(cfg)
    sets = build_tuning_sets(
        seed, corpus_size=int(oml.get("corpus_size", 6120)),
        n_sets=int(tuning.get("n_sets", 3)), test_size=int(tuning.get("test_size", 100)),
        holdout_size=int(tuning.get("holdout_size", 400)), configs=configs.sizes,
        train_coeffs=coeffs, test_coeffs=RuntimeCoefficients.from_dict(tuning.get("test_profile")),
        ranges=ranges, noise_sigma=float(tuning.get("noise_sigma", 0.0)))
    if args.model:
        model = load_model(args.model)
    else:
        model = oml_train_offline(PerceptronModel(eta=float(oml.get("eta", 0.04))), sets.training,
                                  epochs=int(oml.get("epochs", 1)))
    rates = args.rates or tuple(float(r) for r in tuning.get("rates", (0.0, 0.04)))
    curve = learning_rate_sweep(model, sets.test_sets, sets.holdouts, rates)
    summary = summarize_curve(curve)

    out = _out_root(args, cfg) / (args.experiment or "tune-oml")
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "curve.csv", ("rate", "relative_rmse"),
              [{"rate": r, "relative_rmse": e} for r, e in curve])
    result = {"curve": summary.as_dict(), "seed": seed}
    if args.cache:
        regimes = {k: float(v) for k, v in (tuning.get("regimes") or {"cold": 1.0}).items()}
        trained = train_regime_models(sets.training, {k: regimes[k] for k in ("cold", "warm")
                                                      if k in regimes},
                                      eta=float(oml.get("eta", 0.04)),
                                      epochs=int(oml.get("epochs", 1)))
        cache = cache_robustness_eval(trained, sets.test_sets[0], sets.holdouts[0], regimes,
                                      rate=float(oml.get("eta", 0.04)))
        result["cache"] = cache.as_dict()
    (out / "summary.json").write_text(json.dumps(result, indent=2, sort_keys=True) + "\n",
                                      encoding="utf-8")
    if args.save_model:
        save_model(model, args.save_model)

    print(f"Bästa takt {summary.best_rate} (rel. RMSE {summary.best_error:.4f}), "
          f"inre minimum: {summary.interior_minimum}, platt dal: {summary.flat_valley}")
    _record(args, cfg, "tune-oml", policy="oml", seed=seed)
    return 0


def cmd_placement_plan(args, cfg: Config) -> int:
    profile = StorageProfile.from_config(cfg)
    table_bytes = args.table_bytes if args.table_bytes is not None else profile.table_bytes
    configs = _config_set(args, cfg).sizes
    strategy = args.strategy or SHUFFLED
    plan_doc: dict = {"strategy": strategy, "table_bytes": table_bytes}

    if strategy == SHUFFLED:
        src = args.from_c or configs[0]
        dst = args.to_c or src
        universe = sorted({*configs, src, dst})
        layout = build_uniform_layout(table_bytes, src, default_j(universe, src))
        plan = plan_shuffle_resize(layout, dst)
        fraction = movement_fraction(plan, layout)
        seconds = estimate_reconfig_time(plan, profile)
        print(f"{src} -> {dst}: {len(plan)} av {layout.n_minis} mini-partitioner flyttas "
              f"(andel {fraction:.4f}), ca {seconds:.1f} s")
        for m in plan.moves:
            print(f"  mini {m.mini}: r{m.source + 1} -> r{m.destination + 1}")
        plan_doc.update(layout=layout.as_dict(), plan=plan.as_dict(), moved_fraction=fraction,
                        reconfig_s=seconds)
    elif strategy == STATIC_CHUNKS:
        chunks = build_static_replicated_chunks(configs, table_bytes)
        for c in configs[:-1]:
            print(f"konfiguration {c}:")
            for owner, holder, n in chunks.copy_summary(c):
                suffix = f" ({n} mini-partitioner)" if chunks.base.j > 1 else ""
                print(f"  p_r{owner + 1} -> r{holder + 1}{suffix}")
        plan_doc.update(base=chunks.base.as_dict(), extra_bytes=chunks.extra_bytes,
                        copies={str(c): [[cp.mini, cp.owner, cp.holder] for cp in cps]
                                for c, cps in chunks.copies.items()})
        print(f"extra lagrat: {chunks.extra_bytes / max(table_bytes, 1):.3f} tabellkopior")
    elif strategy == STATIC_REPLICATED:
        layouts = build_static_replicated(configs, table_bytes)
        print(f"{len(layouts)} kopior, totalt {stored_bytes(layouts):.0f} bytes")
        plan_doc.update(layouts={str(c): lay.as_dict() for c, lay in layouts.items()})
    else:
        d = args.d_data or configs[-1]
        c = args.c_compute or configs[0]
        dyn = build_dynamic_layout(d, c, table_bytes)
        print(f"{d} datanoder, {c} beräkningsnoder -> {dyn.variant}")
        plan_doc.update(data=dyn.data.as_dict(), compute_workers=list(dyn.compute_workers),
                        variant=dyn.variant)

    plan_doc["ingest_s"] = estimate_ingest_time(strategy, table_bytes, profile, configs,
                                                init_c=args.from_c or None, d_data=args.d_data)
    print(f"ingest: ca {plan_doc['ingest_s']:.1f} s")
    out = _out_root(args, cfg) / (args.experiment or f"placement-{strategy}")
    out.mkdir(parents=True, exist_ok=True)
    (out / "plan.json").write_text(json.dumps(plan_doc, indent=2, sort_keys=True) + "\n",
                                   encoding="utf-8")
    return 0


def cmd_report(args, cfg: Config) -> int:
    seed = _seed(args, cfg)
    configs = _config_set(args, cfg)
    env = _env(args, cfg, seed)
    wl = cfg.section("workloads")
    suite = ten_workload_suite(seed, args.n or int(wl.get("n", 100)),
                               pool=_pool(cfg, configs.sizes, seed), configs=configs.sizes)
    model = _model(args, cfg, configs.sizes, seed)
    oml = cfg.policy("oml")
    comparison = compare_policies(
        suite, configs, model, SweepGrid.from_config(cfg, "pi"), SweepGrid.from_config(cfg, "rl"),
        env, oml_eta=float(oml.get("eta", 0.04)),
        random_seed=int(cfg.policy("random").get("seed", seed)),
        threads=cfg.sim_threads)
    experiment = args.experiment or "macro"
    emit_report(_out_root(args, cfg), experiment, comparison.traces, env,
                sweeps=comparison.sweeps, extra={"comparison": comparison.summary()})
    for run in comparison.runs:
        print(f"{run.run_name:28} PR={run.pr:.4f} CS={run.cs:.4f} rel.std={run.rel_std:.4f}")
    _record(args, cfg, "report", seed=seed, sweeps=comparison.sweeps)
    return 0


# ---- parser ----

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="sökväg till config.yaml")
    common.add_argument("--seed", type=int)
    common.add_argument("--configs", type=_sizes, help="t.ex. 4,6,8,10,12")
    common.add_argument("--init", type=int, help="initial klusterstorlek")
    common.add_argument("--out", help="rapportrot (default reports/)")
    common.add_argument("--experiment", help="namn på rapportkatalogen")
    common.add_argument("--record", action="store_true", help="logga körningen i databasen")
    common.add_argument("--params", help="platt YAML-fil med policyparametrar")

    workload = argparse.ArgumentParser(add_help=False)
    workload.add_argument("--workload", choices=WORKLOADS, default="micro-w1")
    workload.add_argument("--workload-file", help="JSON-lines-arbetslast")
    workload.add_argument("--n", type=int, help="antal frågor (slumpade arbetslaster)")
    workload.add_argument("--filter", choices=FILTERS)
    workload.add_argument("--cache-mode", choices=CACHE_MODES)
    workload.add_argument("--strategy", choices=STRATEGIES)

    p = argparse.ArgumentParser(prog="elastic_scaler", description="Elastisk klusterskalning")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common, workload], help="kör en session")
    s.add_argument("--policy", choices=POLICY_NAMES, required=True)
    s.add_argument("--model", help="tränad perceptron (JSON)")
    s.add_argument("--dump-workload", help="skriv arbetslasten som JSON-lines")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("sweep", parents=[common, workload], help="overfit-sökning")
    s.add_argument("--family", choices=("pi", "rl"), required=True)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("tune-oml", parents=[common], help="svep över inlärningstakter")
    s.add_argument("--rates", type=lambda t: tuple(float(v) for v in t.split(",")))
    s.add_argument("--model", help="starta från en sparad perceptron (JSON)")
    s.add_argument("--save-model", help="spara offlinemodellen (JSON)")
    s.add_argument("--cache", action="store_true", help="utvärdera även cold/warm-träning")
    s.set_defaults(func=cmd_tune_oml)

    s = sub.add_parser("placement-plan", parents=[common], help="placeringsplaner")
    s.add_argument("--strategy", choices=STRATEGIES)
    s.add_argument("--from", dest="from_c", type=int)
    s.add_argument("--to", dest="to_c", type=int)
    s.add_argument("--table-bytes", type=float)
    s.add_argument("--d-data", type=int)
    s.add_argument("--c-compute", type=int)
    s.set_defaults(func=cmd_placement_plan)

    s = sub.add_parser("report", parents=[common], help="makrojämförelse över tio arbetslaster")
    s.add_argument("--n", type=int)
    s.add_argument("--model", help="tränad perceptron (JSON)")
    s.set_defaults(func=cmd_report, cache_mode=None, strategy=None)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        setup_logging(cfg)
        return args.func(args, cfg)
    except (ScalerError, ValueError, OSError) as exc:
        logger.error("%s avbröts: %s", args.command, exc)
        return 2
    except Exception:  # noqa: BLE001
        logger.exception("%s kraschade", args.command)
        return 1


if __name__ == "__main__":
    sys.exit(main())
