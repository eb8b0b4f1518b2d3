"""Verificação dos critérios AX contra os oráculos exatos."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional

from autoexplore.analysis import (
    controllability_level,
    controllable_set,
    incrementally_controllable_set,
    optimal_shortest_path,
)
from autoexplore.mdp.core import AlgoParams, TabularMdp
from autoexplore.reporting.tables import AxFlags, RunRecord

VALUE_SLACK = 1e-9


@dataclass(frozen=True)
class ControllabilityOracle:
    """Conjuntos e valores exatos usados para julgar as execuções.

    ``restricted_values[s]`` é ``V*_{S_L→}(s0 → s)``; ``levels[s]`` é o menor
    ``l`` com ``s`` incrementalmente ``l``-controlável (só para ``s`` em ``S_L→``).
    """

    L: float
    controllable: FrozenSet[int]
    incremental: FrozenSet[int]
    restricted_values: Dict[int, float]
    levels: Dict[int, float]


def build_oracle(mdp: TabularMdp, params: AlgoParams, *, with_levels: bool = True) -> ControllabilityOracle:
    incremental = incrementally_controllable_set(mdp, params.L)
    s0 = mdp.initial_state
    values = {
        s: optimal_shortest_path(mdp, incremental, s)[0].at(s0) for s in range(mdp.num_states)
    }
    levels: Dict[int, float] = {}
    if with_levels:
        for s in sorted(incremental):
            level = controllability_level(mdp, s, params.L)
            if level is not None:
                levels[s] = level
    return ControllabilityOracle(
        L=params.L,
        controllable=controllable_set(mdp, params.L),
        incremental=incremental,
        restricted_values=values,
        levels=levels,
    )


def verify_ax(
    record: RunRecord,
    mdp: TabularMdp,
    params: AlgoParams,
    oracle: Optional[ControllabilityOracle] = None,
) -> AxFlags:
    """Calcula as flags AX_L, AX′ e AX* de uma execução.

    Todas exigem ``K ⊇ S_L→``. AX_L pede tempo ``<= L + eps`` para todo estado de
    K; AX′ e AX* comparam cada estado de ``S_L→`` com ``L′ + eps`` e com
    ``V*_{S_L→} + eps``.
    """
    if oracle is None:
        oracle = build_oracle(mdp, params)
    eps = params.epsilon
    known = set(record.known)
    if not oracle.incremental <= known:
        return AxFlags(False, False, False)
    missing = [s for s in known if s not in record.hitting_times]
    if missing:
        raise ValueError(f"Registro sem tempo de chegada para os estados {sorted(missing)}.")
    times = record.hitting_times
    ax_l = all(times[s] <= params.L + eps + VALUE_SLACK for s in known)
    ax_star = all(
        times[s] <= oracle.restricted_values[s] + eps + VALUE_SLACK for s in oracle.incremental
    )
    ax_prime = all(
        times[s] <= oracle.levels.get(s, params.L) + eps + VALUE_SLACK for s in oracle.incremental
    )
    return AxFlags(ax_l=ax_l, ax_prime=ax_prime, ax_star=ax_star)
