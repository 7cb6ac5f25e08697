"""
Tests for configuration loading and helpers.

Run with: pytest tests/test_utils.py -v
"""

import pytest

from errors import ConfigError
from utils import (
    ceil_div,
    get_construct_config,
    get_exact_config,
    get_minimizer_config,
    get_sweep_config,
    get_thread_count,
    get_tolerances,
    get_verify_config,
    load_config,
)


class TestLoadConfig:
    """Tests for YAML config loading."""

    def test_load_config_returns_dict(self):
        config = load_config()
        assert isinstance(config, dict)

    def test_config_has_required_sections(self):
        config = load_config()
        for section in ("exact", "construct", "minimizer", "tolerances", "verify", "sweep", "parallel"):
            assert section in config

    def test_config_is_cached(self):
        assert load_config() is load_config()


class TestGetters:
    """Getters expose the shipped defaults."""

    def test_exact_defaults(self):
        config = get_exact_config()
        assert config["node_budget"] == 10_000_000
        assert config["exhaustive_max_vertices"] == 24

    def test_construct_defaults(self):
        config = get_construct_config()
        assert config["trials"] == 1000
        assert config["seed"] == 0
        assert 0 < config["fallback_probability"] < 1

    def test_minimizer_defaults(self):
        config = get_minimizer_config()
        assert config["grid_steps"] == 512
        assert config["tol"] == pytest.approx(1e-12)

    @pytest.mark.parametrize("key", ["max_sweeps", "grid_steps"])
    def test_minimizer_rejects_zero_counts(self, monkeypatch, key):
        monkeypatch.setattr("utils.load_config", lambda: {"minimizer": {key: 0}})
        with pytest.raises(ConfigError):
            get_minimizer_config()

    def test_tolerances(self):
        tol = get_tolerances()
        assert tol["identity_abs"] == pytest.approx(1e-9)
        assert tol["minimizer_rel"] == pytest.approx(1e-6)
        assert tol["stationarity"] == pytest.approx(1e-8)
        assert tol["finite_difference_step"] == pytest.approx(1e-6)

    def test_verify_ranges(self):
        config = get_verify_config()
        assert config["table_delta_max"] == 1000
        assert config["improvement_grid"] == 33
        assert config["improvement_part_size"] == 50

    def test_sweep_ranges(self):
        config = get_sweep_config()
        assert (config["n1"], config["n2"]) == (50, 50)


class TestThreadCount:
    """DISTDOM_THREADS overrides parallel.max_threads."""

    def test_defaults_to_config(self, monkeypatch):
        monkeypatch.delenv("DISTDOM_THREADS", raising=False)
        assert get_thread_count() == 1

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("DISTDOM_THREADS", "4")
        assert get_thread_count() == 4

    def test_rejects_zero(self, monkeypatch):
        monkeypatch.setenv("DISTDOM_THREADS", "0")
        with pytest.raises(ConfigError):
            get_thread_count()

    def test_rejects_garbage(self, monkeypatch):
        monkeypatch.setenv("DISTDOM_THREADS", "many")
        with pytest.raises(ConfigError):
            get_thread_count()


class TestCeilDiv:
    @pytest.mark.parametrize("a,b,expected", [(0, 4, 0), (1, 4, 1), (4, 4, 1), (5, 4, 2), (13, 6, 3)])
    def test_values(self, a, b, expected):
        assert ceil_div(a, b) == expected
