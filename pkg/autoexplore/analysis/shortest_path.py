"""Exact restricted shortest paths and controllable-set oracles."""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, Optional, Tuple

import numpy as np

from autoexplore.mdp.core import DeterministicPolicy, HittingValues, TabularMdp
from autoexplore.mdp.graph import almost_sure_states
from autoexplore.planning.ssp import SspProblem, vi_ssp

ORACLE_TOLERANCE = 1e-10
MEMBERSHIP_SLACK = 1e-9


def optimal_shortest_path(
    mdp: TabularMdp,
    restricted_set: Iterable[int],
    goal: int,
    *,
    cost: Optional[np.ndarray] = None,
    tolerance: float = ORACLE_TOLERANCE,
) -> Tuple[HittingValues, DeterministicPolicy]:
    """``V*_{S'}(s -> goal)`` for every ``s`` and a greedy policy restricted on ``S'``.

    Outside ``restricted_set | {goal}`` only RESET is available. ``cost`` is an
    optional ``(S, A)`` array in ``(0, 1]``; unit costs otherwise.
    """
    S, A = mdp.num_states, mdp.num_actions
    reset = mdp.reset_action
    inside = np.zeros(S, dtype=bool)
    inside[list(restricted_set)] = True
    if not inside[mdp.initial_state]:
        raise ValueError("O conjunto restrito deve conter s0.")
    allowed = np.zeros((S, A), dtype=bool)
    allowed[inside] = True
    allowed[:, reset] = True
    goal_mask = np.zeros(S, dtype=bool)
    goal_mask[goal] = True
    proper, stays = almost_sure_states(mdp.support(), allowed, goal_mask)

    values = np.full(S, np.inf)
    values[goal] = 0.0
    actions = np.full(S, reset, dtype=np.int64)
    members = [s for s in np.flatnonzero(proper) if s != goal]
    if members:
        order = members + [goal]
        kernel = mdp.transition[np.ix_(members, range(A), order)]
        step_cost = np.ones((len(members), A)) if cost is None else np.asarray(cost, dtype=float)[members]
        problem = SspProblem(tuple(members), kernel, step_cost, stays[members], goal)
        u, greedy = vi_ssp(problem, tolerance)
        values[members] = u.u
        actions[members] = greedy.action_of
    actions[~inside] = reset
    return HittingValues(values, goal), DeterministicPolicy(actions)


def restricted_values(mdp: TabularMdp, restricted_set: Iterable[int], goals: Iterable[int]) -> Dict[int, float]:
    """Value at s0 of the restricted optimum, per goal."""
    restricted = list(restricted_set)
    s0 = mdp.initial_state
    return {goal: optimal_shortest_path(mdp, restricted, goal)[0].at(s0) for goal in goals}


def incrementally_controllable_set(mdp: TabularMdp, L: float) -> FrozenSet[int]:
    """Greedy batch closure: add every state reachable within ``L`` using the current set."""
    if L < 1:
        raise ValueError("L deve ser >= 1.")
    known = {mdp.initial_state}
    while True:
        outside = [s for s in range(mdp.num_states) if s not in known]
        values = restricted_values(mdp, known, outside)
        added = {s for s, v in values.items() if v <= L + MEMBERSHIP_SLACK}
        if not added:
            return frozenset(known)
        known |= added


def controllable_set(mdp: TabularMdp, L: float) -> FrozenSet[int]:
    """States whose unrestricted shortest path from s0 is at most ``L``."""
    everything = range(mdp.num_states)
    values = restricted_values(mdp, everything, everything)
    return frozenset(s for s, v in values.items() if v <= L + MEMBERSHIP_SLACK)


def controllability_level(
    mdp: TabularMdp,
    state: int,
    L: float,
    *,
    resolution: float = 1e-3,
) -> Optional[float]:
    """Smallest ``l`` in ``[1, L]`` with ``state`` incrementally ``l``-controllable.

    Bisection at ``resolution``; ``None`` when the state is not in the
    incremental set for ``L`` itself.
    """
    if state not in incrementally_controllable_set(mdp, L):
        return None
    if state in incrementally_controllable_set(mdp, 1.0):
        return 1.0
    low, high = 1.0, float(L)
    while high - low > resolution:
        middle = 0.5 * (low + high)
        if state in incrementally_controllable_set(mdp, middle):
            high = middle
        else:
            low = middle
    return high
