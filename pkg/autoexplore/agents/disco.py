"""DisCo: discovery of incrementally controllable states with goal-conditioned policies.

Each round collects samples on ``K x A``, restricts the discovered states to the
likely-reachable candidates, plans optimistically towards each candidate and
transfers the cheapest one into ``K``. The run ends when no candidate is left
(STOP1) or the cheapest one costs more than ``L`` (STOP2); policies are then
recomputed on the final counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Union

import numpy as np

from autoexplore.agents.common import (
    EventRecord,
    ExplorationResult,
    MdpEnvironment,
    StopReason,
)
from autoexplore.mdp.core import AlgoParams, DeterministicPolicy, Mode
from autoexplore.planning.counts import CountsTable, record_transition
from autoexplore.planning.optimistic import build_optimistic_instance, ovi_ssp
from autoexplore.planning.ssp import vi_ssp

Allocation = Union[int, np.ndarray]
CostFunction = Union[np.ndarray, Callable[[int, int], float]]


@dataclass
class DiscoState:
    """Mutable bookkeeping of one DisCo run.

    ``candidates`` holds U (insertion order = discovery order); ``order`` ranks
    every state ever observed and breaks ties between goals.
    """

    params: AlgoParams
    counts: CountsTable
    initial_state: int
    reset_action: int
    known: List[int] = field(default_factory=list)
    policies: Dict[int, DeterministicPolicy] = field(default_factory=dict)
    candidates: Dict[int, None] = field(default_factory=dict)
    order: Dict[int, int] = field(default_factory=dict)
    discovery_steps: Dict[int, int] = field(default_factory=dict)
    event_log: List[EventRecord] = field(default_factory=list)
    round_index: int = 0

    @classmethod
    def start(cls, env: MdpEnvironment, params: AlgoParams) -> "DiscoState":
        s0 = env.initial_state
        state = cls(
            params=params,
            counts=CountsTable.empty(env.num_states, env.num_actions),
            initial_state=s0,
            reset_action=env.reset_action,
        )
        state.known.append(s0)
        state.policies[s0] = DeterministicPolicy.constant(env.num_states, env.reset_action)
        state.order[s0] = 0
        state.discovery_steps[s0] = 0
        return state

    def log(self, kind: str, detail: str = "") -> None:
        self.event_log.append(EventRecord(self.counts.total_steps, kind, detail))


def allocation_gamma(L: float, epsilon: float) -> float:
    return 2.0 * epsilon / (12.0 * (L + 1.0 + epsilon) * (L + epsilon / 3.0))


def theoretical_allocation(x_k: float, gamma: float, n_meta: int, S: int, A: int, delta: float) -> int:
    """Closed-form per-pair sample requirement; ``n_meta`` is ``|K| + 2``."""
    variance_part = 0.0
    if x_k > 0.0:
        log_term = math.log(8.0 * math.e * x_k * math.sqrt(2.0 * S * A) / (math.sqrt(delta) * gamma))
        variance_part = 57.0 * x_k**2 / gamma**2 * log_term**2
    linear_part = 24.0 * n_meta / gamma * math.log(24.0 * n_meta * S * A / (delta * gamma))
    return int(math.ceil(variance_part + linear_part))


def _std_sums(counts: CountsTable, K: List[int]) -> np.ndarray:
    """``sum_{y in K} sqrt(p_hat (1 - p_hat))`` for every pair of ``K x A``."""
    p_hat = counts.empirical_kernel()[K][:, :, K]
    return np.sqrt(p_hat * (1.0 - p_hat)).sum(axis=2)


def _split_std_sums(counts: CountsTable, K: List[int]) -> np.ndarray:
    """Standard-deviation sums over ``K | {x, goal}`` with x and the goal as separate columns.

    The goal is not fixed yet, so every state outside ``K`` is tried as goal
    (x keeps the rest of the outside mass) and the largest sum is kept.
    """
    p_hat = counts.empirical_kernel()[K]
    inside = p_hat[:, :, K]
    within = np.sqrt(inside * (1.0 - inside)).sum(axis=2)
    residual = np.clip(1.0 - inside.sum(axis=2), 0.0, 1.0)
    outside = np.setdiff1d(np.arange(counts.num_states), K)
    if outside.size == 0:
        return within + np.sqrt(residual * (1.0 - residual))
    goal_mass = p_hat[:, :, outside]
    meta_mass = np.clip(residual[:, :, None] - goal_mass, 0.0, 1.0)
    split = np.sqrt(goal_mass * (1.0 - goal_mass)) + np.sqrt(meta_mass * (1.0 - meta_mass))
    return within + split.max(axis=2)


def allocation_phi(counts: CountsTable, K: List[int], params: AlgoParams) -> Allocation:
    """Per-pair sample target for the current round.

    Practical mode with ``theta="pair"`` returns a ``(|K|, A)`` array; the other
    modes return one integer for every pair.
    """
    if not K:
        raise ValueError("K não pode ser vazio.")
    L, eps = params.L, params.epsilon
    S, A = counts.num_states, counts.num_actions
    if params.mode is Mode.THEORETICAL:
        x_k = float(_split_std_sums(counts, K).max())
        target = theoretical_allocation(x_k, allocation_gamma(L, eps), len(K) + 2, S, A, params.delta)
        return max(target, int(math.ceil(L * math.log(3.0 * A * L * S / params.delta))))

    theta = _std_sums(counts, K) ** 2
    if params.theta == "max":
        theta = np.full_like(theta, theta.max())
    targets = np.ceil(L**4 * theta / eps**2 + L**2 * len(K) / eps).astype(np.int64)
    targets = np.maximum(targets, int(math.ceil(L)))
    if params.theta == "max":
        return int(targets.max())
    return targets


def _observe(state: DiscoState, env: MdpEnvironment, action: int) -> int:
    source = env.state
    target = env.step(action)
    record_transition(state.counts, source, action, target)
    if target not in state.order:
        state.order[target] = len(state.order)
    if target not in state.policies and target not in state.candidates:
        state.candidates[target] = None
    return target


def collect_samples(state: DiscoState, env: MdpEnvironment, n_k: Allocation) -> DiscoState:
    """Drive every pair of ``K x A`` up to its target, navigating with ``pi_s``."""
    targets = np.broadcast_to(np.asarray(n_k, dtype=np.int64), (len(state.known), env.num_actions))
    for i, s in enumerate(list(state.known)):
        policy = state.policies[s]
        for a in range(env.num_actions):
            while state.counts.n_sa[s, a] < targets[i, a]:
                while env.state != s:
                    _observe(state, env, policy(env.state))
                _observe(state, env, a)
    return state


def restrict_candidates(state: DiscoState) -> List[int]:
    """Candidates reached in one step with empirical probability ``>= (1 - eps/2)/L``."""
    if not state.candidates:
        return []
    threshold = (1.0 - state.params.epsilon / 2.0) / state.params.L
    p_hat = state.counts.empirical_kernel()[state.known]
    best = p_hat.max(axis=(0, 1))
    return [u for u in state.candidates if best[u] >= threshold]


def _plan(state: DiscoState, goal: int):
    gamma = state.params.epsilon / (6.0 * state.params.L)
    return ovi_ssp(
        state.counts,
        state.known,
        goal,
        gamma,
        state.params,
        initial_state=state.initial_state,
        reset_action=state.reset_action,
    )


def _consolidate(state: DiscoState) -> None:
    for s in state.known:
        if s == state.initial_state:
            continue
        values, policy = _plan(state, s)
        state.policies[s] = policy
        state.log("consolidate", f"s{s}: u(s0)={values.at(state.initial_state):.4f}")


def disco_run(env: MdpEnvironment, params: AlgoParams) -> ExplorationResult:
    """Run DisCo until STOP1 or STOP2 and return the consolidated policies."""
    state = DiscoState.start(env, params)
    s0 = state.initial_state
    while True:
        n_k = allocation_phi(state.counts, state.known, params)
        collect_samples(state, env, n_k)
        candidates = restrict_candidates(state)
        bound = 2.0 * params.L * env.num_actions * len(state.known)
        if len(candidates) > bound:
            raise RuntimeError(f"|W|={len(candidates)} excede 2LA|K|={bound:g}")
        state.log(
            "round",
            f"k={state.round_index} |K|={len(state.known)} |U|={len(state.candidates)} |W|={len(candidates)}",
        )
        if not candidates:
            stop = StopReason.STOP1
            break

        plans = {goal: _plan(state, goal) for goal in candidates}
        chosen = min(candidates, key=lambda g: (plans[g][0].at(s0), state.order[g]))
        value = plans[chosen][0].at(s0)
        if value > params.L:
            stop = StopReason.STOP2
            break

        state.known.append(chosen)
        del state.candidates[chosen]
        state.policies[chosen] = plans[chosen][1]
        state.discovery_steps[chosen] = state.counts.total_steps
        state.log("transfer", f"s{chosen}: u(s0)={value:.4f}")
        state.round_index += 1

    state.log("stop", stop.value)
    _consolidate(state)
    return ExplorationResult(
        algorithm="disco",
        params=params,
        known=tuple(state.known),
        policies=dict(state.policies),
        counts=state.counts,
        total_steps=env.steps,
        stop_reason=stop,
        discovery_steps=dict(state.discovery_steps),
        reset_action=state.reset_action,
        event_log=state.event_log,
        rounds=state.round_index + 1,
    )


def _cost_table(cost: CostFunction, num_states: int, num_actions: int) -> np.ndarray:
    if callable(cost):
        return np.array([[cost(s, a) for a in range(num_actions)] for s in range(num_states)], dtype=float)
    table = np.asarray(cost, dtype=float)
    if table.shape != (num_states, num_actions):
        raise ValueError(f"Custo deve ter formato ({num_states}, {num_actions}).")
    return table


def plan_from_counts(
    counts: CountsTable,
    known: Sequence[int],
    goal: int,
    cost: CostFunction,
    gamma: float,
    params: AlgoParams,
    *,
    initial_state: int,
    reset_action: int,
) -> DeterministicPolicy:
    """Cost-sensitive optimistic policy on ``known`` towards ``goal`` (no sampling)."""
    if goal not in known:
        raise ValueError(f"Estado {goal} não pertence a K.")
    table = _cost_table(cost, counts.num_states, counts.num_actions)
    if not table[list(known)].min() > 0.0:
        raise ValueError("Custos em K devem ser positivos (c_min > 0).")
    if goal == initial_state:
        return DeterministicPolicy.constant(counts.num_states, reset_action)
    instance = build_optimistic_instance(
        counts,
        known,
        goal,
        params,
        initial_state=initial_state,
        reset_action=reset_action,
        cost=table,
    )
    _, greedy = vi_ssp(instance.to_problem(), gamma)
    actions = np.full(counts.num_states, reset_action, dtype=np.int64)
    actions[list(instance.states)] = greedy.action_of[: len(instance.states)]
    return DeterministicPolicy(actions)


def zero_shot_plan(
    result: ExplorationResult,
    goal: int,
    cost: CostFunction,
    gamma: float,
) -> DeterministicPolicy:
    """Cost-sensitive policy towards ``goal`` from the final counts of ``result``."""
    return plan_from_counts(
        result.counts,
        result.known,
        goal,
        cost,
        gamma,
        result.params,
        initial_state=result.known[0],
        reset_action=result.reset_action,
    )


def infer_known_states(counts: CountsTable, initial_state: int) -> List[int]:
    """States whose every action was sampled; s0 first.

    Collection only samples RESET outside ``K``, so this recovers ``K`` from a
    saved DisCo snapshot.
    """
    tried = np.flatnonzero((counts.n_sa > 0).all(axis=1))
    return [initial_state] + [int(s) for s in tried if s != initial_state]
