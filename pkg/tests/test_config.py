"""Tester för konfigurationslagret och engine-cachen."""
from __future__ import annotations

import pytest

from elastic_scaler.config import Config, load_config, load_params
from elastic_scaler.db.session import engine_for, init_db, new_session
from elastic_scaler.errors import ConfigurationError


def test_sections_and_policies():
    cfg = Config({"bench": {"threads": 3}, "policies": {"pi": {"k_p": 50.0}}, "reports": None})
    assert cfg.section("bench") == {"threads": 3}
    assert cfg.section("reports") == {}
    assert cfg.section("saknas") == {}
    assert cfg.policy("pi") == {"k_p": 50.0}
    assert cfg.policy("rl") == {}
    # kopia, inte en vy
    cfg.policy("pi")["k_p"] = 0.0
    assert cfg.policy("pi") == {"k_p": 50.0}
    with pytest.raises(ConfigurationError):
        Config({"bench": [1, 2]}).section("bench")


def test_environment_wins_over_file(monkeypatch):
    cfg = Config({"database": {"url": "sqlite://"}, "bench": {"threads": 2},
                  "logging": {"level": "debug"}})
    monkeypatch.delenv("DATABASE_URL", raising=False)
    monkeypatch.delenv("PERF_SIM_THREADS", raising=False)
    monkeypatch.delenv("LOG_LEVEL", raising=False)
    assert (cfg.database_url, cfg.sim_threads, cfg.log_level) == ("sqlite://", 2, "DEBUG")
    monkeypatch.setenv("DATABASE_URL", "sqlite:///annan.db")
    monkeypatch.setenv("PERF_SIM_THREADS", "0")
    monkeypatch.setenv("LOG_LEVEL", "warning")
    assert (cfg.database_url, cfg.sim_threads, cfg.log_level) == ("sqlite:///annan.db", 1, "WARNING")
    monkeypatch.setenv("PERF_SIM_THREADS", "många")
    assert cfg.sim_threads == 1


def test_missing_database_url(monkeypatch):
    monkeypatch.delenv("DATABASE_URL", raising=False)
    with pytest.raises(ConfigurationError):
        _ = Config({}).database_url


def test_load_config_rejects_bad_files(tmp_path):
    bad = tmp_path / "lista.yaml"
    bad.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_config(str(bad))
    with pytest.raises(ConfigurationError):
        load_config(str(tmp_path / "finns-inte.yaml"))
    empty = tmp_path / "tom.yaml"
    empty.write_text("", encoding="utf-8")
    assert load_config(str(empty)).section("simulation") == {}


def test_default_config_has_simulation_section():
    sim = load_config().section("simulation")
    assert sim["configs"] == [4, 6, 8, 10, 12]


def test_load_params_must_be_flat(tmp_path):
    flat = tmp_path / "p.yaml"
    flat.write_text("k_p: 10\nw: 2\n", encoding="utf-8")
    assert load_params(flat) == {"k_p": 10, "w": 2}
    nested = tmp_path / "n.yaml"
    nested.write_text("pi:\n  k_p: 10\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_params(nested)


def test_engine_cached_per_url(tmp_path):
    url = f"sqlite:///{tmp_path / 'sub' / 'runs.db'}"
    assert engine_for(url) is engine_for(url)
    assert init_db(url) is engine_for(url)
    assert (tmp_path / "sub").is_dir()
    with new_session(url) as s:
        assert s.get_bind() is engine_for(url)
