"""Exact expected hitting times and costs of fixed policies."""

from __future__ import annotations

from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse.linalg import spsolve

from autoexplore.mdp.core import (
    DeterministicPolicy,
    HittingValues,
    NonStationaryPolicy,
    TabularMdp,
    sample_transition,
)
from autoexplore.mdp.graph import backward_reachable

DENSE_LIMIT = 2000

AnyPolicy = Union[DeterministicPolicy, NonStationaryPolicy]


def absorption_costs(chain, step_cost: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Expected accumulated ``step_cost`` until a target node is hit.

    Nodes that miss the targets with positive probability get ``inf``. The
    linear system is solved only on the proper nodes.
    """
    chain = sparse.csr_matrix(chain)
    n = chain.shape[0]
    moving = sparse.diags((~targets).astype(float)) @ chain
    moving.eliminate_zeros()
    reaches = backward_reachable(moving, np.flatnonzero(targets))
    improper = backward_reachable(moving, np.flatnonzero(~reaches))

    values = np.full(n, np.inf)
    values[targets] = 0.0
    solve_idx = np.flatnonzero(~improper & ~targets)
    if solve_idx.size:
        block = moving[solve_idx][:, solve_idx]
        system = sparse.identity(solve_idx.size, format="csr") - block
        rhs = np.asarray(step_cost, dtype=float)[solve_idx]
        if solve_idx.size <= DENSE_LIMIT:
            solution = scipy.linalg.solve(system.toarray(), rhs)
        else:
            solution = spsolve(system.tocsc(), rhs)
        values[solve_idx] = solution
    return values


def _policy_chain(mdp: TabularMdp, actions: np.ndarray) -> np.ndarray:
    return mdp.transition[np.arange(mdp.num_states), actions, :]


def evaluate_policy_cost(
    mdp: TabularMdp,
    policy: DeterministicPolicy,
    goal: int,
    cost: Optional[np.ndarray] = None,
) -> HittingValues:
    """Exact cost-to-goal of ``policy``; unit costs when ``cost`` is omitted."""
    if len(policy) != mdp.num_states:
        raise ValueError("Política deve cobrir todos os estados do MDP.")
    policy.check(mdp.num_actions)
    actions = policy.action_of
    states = np.arange(mdp.num_states)
    step = np.ones(mdp.num_states) if cost is None else np.asarray(cost, dtype=float)[states, actions]
    targets = np.zeros(mdp.num_states, dtype=bool)
    targets[goal] = True
    return HittingValues(absorption_costs(_policy_chain(mdp, actions), step, targets), goal)


def evaluate_policy_hitting(mdp: TabularMdp, policy: DeterministicPolicy, goal: int) -> HittingValues:
    """Exact ``v_pi(s -> goal)`` for every ``s``."""
    return evaluate_policy_cost(mdp, policy, goal)


def stage_action(policy: AnyPolicy, h: int) -> np.ndarray:
    if isinstance(policy, NonStationaryPolicy):
        if h >= policy.horizon:
            raise ValueError(f"Política com horizonte {policy.horizon} não cobre o estágio {h}.")
        return policy.action_of[h]
    return policy.action_of


def resetting_policy_hitting(mdp: TabularMdp, policy: AnyPolicy, goal: int, H: int) -> float:
    """Exact value from s0 of the policy that plays ``policy`` and RESETs every ``H`` steps.

    Evaluated on the chain over (stage, state) pairs; stage ``H`` forces RESET.
    """
    if H < 1:
        raise ValueError("H deve ser >= 1.")
    S = mdp.num_states
    s0 = mdp.initial_state
    if goal == s0:
        return 0.0
    rows, cols, probs = [], [], []
    for h in range(H):
        chain = _policy_chain(mdp, stage_action(policy, h))
        src, dst = np.nonzero(chain)
        rows.append(h * S + src)
        cols.append((h + 1) * S + dst)
        probs.append(chain[src, dst])
    rows.append(H * S + np.arange(S))
    cols.append(np.full(S, s0))
    probs.append(np.ones(S))
    n = (H + 1) * S
    augmented = sparse.csr_matrix(
        (np.concatenate(probs), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    targets = np.zeros(n, dtype=bool)
    targets[goal::S] = True
    return float(absorption_costs(augmented, np.ones(n), targets)[s0])


def simulate_resetting_policy(
    mdp: TabularMdp,
    policy: AnyPolicy,
    goal: int,
    H: int,
    rng: np.random.Generator,
    episodes: int,
    *,
    max_steps: int = 10_000_000,
) -> Tuple[float, float]:
    """Monte Carlo mean and standard error of the resetting policy's hitting time."""
    reset = mdp.reset_action
    lengths = np.empty(episodes)
    for i in range(episodes):
        s, h, steps = mdp.initial_state, 0, 0
        while s != goal:
            if h == H:
                a, h = reset, 0
            else:
                a, h = int(stage_action(policy, h)[s]), h + 1
            s = sample_transition(mdp, s, a, rng)
            steps += 1
            if steps > max_steps:
                raise RuntimeError(f"Episódio excedeu {max_steps} passos sem atingir {goal}.")
        lengths[i] = steps
    stderr = float(lengths.std(ddof=1) / np.sqrt(episodes)) if episodes > 1 else 0.0
    return float(lengths.mean()), stderr
