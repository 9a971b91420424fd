"""Queue-delayed multi-armed bandit simulator (C++ core)."""

from ._core import (
    ConfigError,
    derive_substream,
    draw_thetas,
    esi,
    expected_observations,
    pseudo_regret,
    rli,
    run_experiment,
    sampling_pmf,
    simulate,
    validate_config,
)

__all__ = [
    "ConfigError",
    "derive_substream",
    "draw_thetas",
    "esi",
    "expected_observations",
    "pseudo_regret",
    "rli",
    "run_experiment",
    "sampling_pmf",
    "simulate",
    "validate_config",
]
