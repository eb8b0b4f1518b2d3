"""Oráculos exatos: tempos de chegada, caminhos mínimos restritos e conjuntos controláveis."""

from .hitting import (
    absorption_costs,
    evaluate_policy_cost,
    evaluate_policy_hitting,
    resetting_policy_hitting,
    simulate_resetting_policy,
)
from .horizon import effective_horizon, resetting_value, truncated_value_tail
from .shortest_path import (
    controllability_level,
    controllable_set,
    incrementally_controllable_set,
    optimal_shortest_path,
    restricted_values,
)

__all__ = [
    "absorption_costs",
    "evaluate_policy_cost",
    "evaluate_policy_hitting",
    "resetting_policy_hitting",
    "simulate_resetting_policy",
    "effective_horizon",
    "resetting_value",
    "truncated_value_tail",
    "controllability_level",
    "controllable_set",
    "incrementally_controllable_set",
    "optimal_shortest_path",
    "restricted_values",
]
