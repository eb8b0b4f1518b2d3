"""Fluxos de alto nível: experimentos semeados e verificação AX."""

from .experiments import (
    DEFAULT_CONFIG,
    ExperimentSpec,
    InvalidExperimentError,
    build_params,
    explore,
    load_environment,
    load_experiment_config,
    override_spec,
    parse_env_params,
    parse_param_value,
    policy_hitting_times,
    run_experiment,
    run_single,
    spec_from_mapping,
)
from .verification import ControllabilityOracle, build_oracle, verify_ax

__all__ = [
    "DEFAULT_CONFIG",
    "ExperimentSpec",
    "InvalidExperimentError",
    "build_params",
    "explore",
    "load_environment",
    "load_experiment_config",
    "override_spec",
    "parse_env_params",
    "parse_param_value",
    "policy_hitting_times",
    "run_experiment",
    "run_single",
    "spec_from_mapping",
    "ControllabilityOracle",
    "build_oracle",
    "verify_ax",
]
