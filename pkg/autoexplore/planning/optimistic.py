"""Optimistic goal-oriented SSP instances built from visit counts.

The instance lives on ``K | {x, goal}`` where the meta-state ``x`` stands for
every state observed outside ``K``; ``x`` only allows RESET, which moves to s0
at the price of one step.
Probability mass removed by the confidence bonuses is routed to the goal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from autoexplore.mdp.core import AlgoParams, DeterministicPolicy, Mode
from autoexplore.planning.counts import CountsTable
from autoexplore.planning.ssp import SspProblem, ValueVector, vi_ssp

META_STATE = -1


def _bernstein(p: np.ndarray, n_plus: np.ndarray, delta: float, S: int, A: int) -> np.ndarray:
    log_term = np.log(2.0 * S * A * n_plus / delta)
    return 2.0 * np.sqrt(p * (1.0 - p) / n_plus * log_term) + 6.0 * log_term / n_plus


def _practical(p: np.ndarray, n_plus: np.ndarray) -> np.ndarray:
    return np.sqrt(p * (1.0 - p) / n_plus) + 1.0 / n_plus


def bernstein_bonus(counts: CountsTable, s: int, a: int, y: int, delta: float, S: int, A: int) -> float:
    """Empirical-Bernstein width on ``p(y|s,a)`` with ``N+ = max(1, N(s,a))``."""
    n_plus = float(max(1, counts.n_sa[s, a]))
    p = counts.n_sas[s, a, y] / n_plus
    return float(_bernstein(np.float64(p), np.float64(n_plus), delta, S, A))


def practical_bonus(counts: CountsTable, s: int, a: int, y: int) -> float:
    """Constant- and log-free width ``sqrt(p(1-p)/(N v 1)) + 1/(N v 1)``."""
    n_plus = float(max(1, counts.n_sa[s, a]))
    p = counts.n_sas[s, a, y] / n_plus
    return float(_practical(np.float64(p), np.float64(n_plus)))


def bonus_table(
    counts: CountsTable,
    states: Sequence[int],
    columns: Sequence[int],
    params: AlgoParams,
) -> np.ndarray:
    """Bonuses for every ``(s, a, y)`` with ``s`` in ``states`` and ``y`` in ``columns``."""
    A = counts.num_actions
    n_plus = np.maximum(counts.n_sa[list(states)], 1).astype(float)[:, :, None]
    p = counts.n_sas[np.ix_(list(states), range(A), list(columns))] / n_plus
    if params.mode is Mode.THEORETICAL:
        return _bernstein(p, n_plus, params.delta, counts.num_states, A)
    return _practical(p, n_plus)


def restricted_rows(kernel: np.ndarray, members: Sequence[int], goal: int) -> np.ndarray:
    """Project full rows of ``members`` onto columns ``[members..., x, goal]``."""
    rows = kernel[list(members)]
    inside = rows[:, :, list(members)]
    to_goal = rows[:, :, goal]
    meta = np.clip(1.0 - inside.sum(axis=2) - to_goal, 0.0, None)
    return np.concatenate([inside, meta[:, :, None], to_goal[:, :, None]], axis=2)


@dataclass(frozen=True, eq=False)
class RestrictedSspInstance:
    """Goal-absorbing SSP over ``states | {x, goal}``.

    Local indices: ``0..k-1`` for ``states`` (K without the goal), ``k`` for the
    meta-state and ``k + 1`` for the goal. Meta-state and goal only allow RESET;
    the goal is absorbing and free, the RESET at ``x`` is charged like any step.
    """

    states: Tuple[int, ...]
    goal: int
    initial_state: int
    reset_action: int
    kernel: np.ndarray
    cost: np.ndarray
    allowed: np.ndarray

    @property
    def meta_index(self) -> int:
        return len(self.states)

    @property
    def goal_index(self) -> int:
        return len(self.states) + 1

    def global_state(self, local: int) -> int:
        if local == self.meta_index:
            return META_STATE
        if local == self.goal_index:
            return self.goal
        return self.states[local]

    def to_problem(self) -> SspProblem:
        """SSP over ``states | {x}`` (``x`` listed as ``META_STATE``) with the goal as last column."""
        k = self.meta_index
        return SspProblem(
            self.states + (META_STATE,),
            self.kernel[: k + 1],
            self.cost[: k + 1],
            self.allowed[: k + 1],
            self.goal,
        )


def build_optimistic_instance(
    counts: CountsTable,
    K: Iterable[int],
    goal: int,
    params: AlgoParams,
    *,
    initial_state: int,
    reset_action: int,
    cost: Optional[np.ndarray] = None,
) -> RestrictedSspInstance:
    """Optimistic model: ``max(p_hat - beta, 0)`` on ``K | {x}``, the rest to the goal.

    ``goal`` may belong to ``K`` (policy consolidation); it is then dropped from
    the non-goal states. ``cost`` optionally replaces unit costs on ``K``.
    """
    members: List[int] = [s for s in K if s != goal]
    k, A = len(members), counts.num_actions
    p_hat = restricted_rows(counts.empirical_kernel(), members, goal)
    beta = bonus_table(counts, members, members + [goal], params)

    tilde = np.zeros((k + 2, A, k + 2))
    body = tilde[:k]
    body[:, :, :k] = np.maximum(p_hat[:, :, :k] - beta[:, :, :k], 0.0)
    body[:, :, k] = np.maximum(p_hat[:, :, k] - beta.sum(axis=2), 0.0)
    goal_mass = 1.0 - body[:, :, : k + 1].sum(axis=2)
    negative = goal_mass < 0.0
    if negative.any():
        body[negative] /= body[negative].sum(axis=1, keepdims=True)
        goal_mass[negative] = 0.0
    body[:, :, k + 1] = goal_mass

    landing = members.index(initial_state) if initial_state in members else k + 1
    tilde[k, :, landing] = 1.0
    tilde[k + 1, :, k + 1] = 1.0

    step_cost = np.zeros((k + 2, A))
    if cost is None:
        step_cost[: k + 1] = 1.0
    else:
        table = np.asarray(cost, dtype=float)
        step_cost[:k] = table[members]
        step_cost[k] = table[members, reset_action].min() if members else 1.0
    allowed = np.zeros((k + 2, A), dtype=bool)
    allowed[:k] = True
    allowed[k:, reset_action] = True
    return RestrictedSspInstance(tuple(members), goal, initial_state, reset_action, tilde, step_cost, allowed)


def ovi_ssp(
    counts: CountsTable,
    K: Iterable[int],
    goal: int,
    gamma: float,
    params: AlgoParams,
    *,
    initial_state: int,
    reset_action: int,
    cost: Optional[np.ndarray] = None,
) -> Tuple[ValueVector, DeterministicPolicy]:
    """Optimistic VI: values over ``K | {x}`` and a policy restricted on ``K``.

    The meta-state is reported under ``META_STATE``.
    """
    instance = build_optimistic_instance(
        counts, K, goal, params, initial_state=initial_state, reset_action=reset_action, cost=cost
    )
    actions = np.full(counts.num_states, reset_action, dtype=np.int64)
    if not instance.states:
        values = ValueVector(np.ones(1), (META_STATE,))
        return values, DeterministicPolicy(actions)
    values, greedy = vi_ssp(instance.to_problem(), gamma)
    actions[list(instance.states)] = greedy.action_of[: len(instance.states)]
    return values, DeterministicPolicy(actions)
