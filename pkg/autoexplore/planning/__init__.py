"""Planejadores SSP: VI_SSP, contagens de visitas e o modelo otimista."""

from .counts import CountsTable, parse_counts, record_transition, write_counts
from .optimistic import (
    META_STATE,
    RestrictedSspInstance,
    bernstein_bonus,
    bonus_table,
    build_optimistic_instance,
    ovi_ssp,
    practical_bonus,
    restricted_rows,
)
from .ssp import (
    ConvergenceError,
    ImproperProblemError,
    SspProblem,
    ValueVector,
    bellman_backup,
    greedy_actions,
    q_values,
    vi_ssp,
)

__all__ = [
    "CountsTable",
    "parse_counts",
    "record_transition",
    "write_counts",
    "META_STATE",
    "RestrictedSspInstance",
    "bernstein_bonus",
    "bonus_table",
    "build_optimistic_instance",
    "ovi_ssp",
    "practical_bonus",
    "restricted_rows",
    "ConvergenceError",
    "ImproperProblemError",
    "SspProblem",
    "ValueVector",
    "bellman_backup",
    "greedy_actions",
    "q_values",
    "vi_ssp",
]
