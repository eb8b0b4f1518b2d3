"""Ambientes de referência."""

from .benchmarks import (
    ENVIRONMENTS,
    UnknownEnvironmentError,
    make_combination_lock,
    make_confusing_chain,
    make_deterministic_chain,
    make_environment,
    make_layered_star,
)

__all__ = [
    "ENVIRONMENTS",
    "UnknownEnvironmentError",
    "make_combination_lock",
    "make_confusing_chain",
    "make_deterministic_chain",
    "make_environment",
    "make_layered_star",
]
