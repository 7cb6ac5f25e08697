"""
Utility functions for distance-domination runs.
Includes config loading, thread-count resolution and small integer helpers.
"""

import os
from functools import lru_cache
from pathlib import Path

import yaml

from errors import ConfigError

THREADS_ENV_VAR = "DISTDOM_THREADS"


# --- Configuration Loading ---

@lru_cache(maxsize=1)
def load_config() -> dict:
    """Load run defaults from YAML file.

    Cached for the process lifetime; restart to pick up YAML changes.
    """
    config_path = Path(__file__).parent / "config" / "distdom.yaml"
    with open(config_path, "r") as f:
        return yaml.safe_load(f) or {}


def get_exact_config() -> dict:
    """Get exact-search settings (node budget, exhaustive cutoff)."""
    config = load_config()
    return {
        "node_budget": 10_000_000,
        "exhaustive_max_vertices": 24,
        **config.get("exact", {}),
    }


def get_construct_config() -> dict:
    """Get probabilistic-construction defaults (trials, seed, fallback p)."""
    config = load_config()
    return {
        "trials": 1000,
        "seed": 0,
        "fallback_probability": 0.3,
        **config.get("construct", {}),
    }


def get_minimizer_config() -> dict:
    """Get numeric minimizer settings for the h / h* surfaces."""
    config = load_config()
    settings = {
        "grid_steps": 512,
        "tol": 1e-12,
        "max_sweeps": 200,
        **config.get("minimizer", {}),
    }
    for key in ("grid_steps", "max_sweeps"):
        if int(settings[key]) < 1:
            raise ConfigError(f"minimizer.{key} must be >= 1, got {settings[key]}")
    return settings


def get_tolerances() -> dict:
    """Get comparison tolerances for identities and minimizer agreement."""
    config = load_config()
    return {
        "identity_abs": 1e-9,
        "minimizer_rel": 1e-6,
        "stationarity": 1e-8,
        "finite_difference_step": 1e-6,
        **config.get("tolerances", {}),
    }


def get_verify_config() -> dict:
    """Get default ranges for the verification sweeps."""
    config = load_config()
    return {
        "table_delta_max": 1000,
        "improvement_delta_range": 10,
        "improvement_k_range": 100,
        "improvement_part_size": 50,
        "improvement_grid": 33,
        "example_delta_max": 10,
        "example_m_max": 10,
        "chain_grid": 9,
        **config.get("verify", {}),
    }


def get_sweep_config() -> dict:
    """Get default ranges for the CLI profile sweep."""
    config = load_config()
    return {
        "n1": 50,
        "n2": 50,
        "delta_max": 10,
        "k_max": 20,
        **config.get("sweep", {}),
    }


def get_thread_count() -> int:
    """Resolve the worker-thread cap.

    DISTDOM_THREADS wins over ``parallel.max_threads`` in the YAML file.
    """
    raw = os.environ.get(THREADS_ENV_VAR)
    source = THREADS_ENV_VAR
    if not raw:
        raw = load_config().get("parallel", {}).get("max_threads", 1)
        source = "parallel.max_threads"
    try:
        threads = int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{source} must be an integer, got {raw!r}")
    if threads < 1:
        raise ConfigError(f"{source} must be >= 1, got {threads}")
    return threads


# --- Exact integer helpers ---

def ceil_div(a: int, b: int) -> int:
    """Ceiling of a/b for integers, b > 0, without touching floats."""
    return -(-a // b)
