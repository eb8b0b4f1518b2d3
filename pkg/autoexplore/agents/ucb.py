"""UcbExplore baseline: optimistic finite-horizon planning plus episodic policy checks.

Each round plans an ``H``-step policy towards every candidate, tries the most
promising one for up to ``lambda`` episodes from s0 and accepts it when the
empirical resetting value stays within ``L + eps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from autoexplore.agents.common import (
    EventRecord,
    ExplorationResult,
    MdpEnvironment,
    StopReason,
)
from autoexplore.analysis.horizon import resetting_value
from autoexplore.mdp.core import AlgoParams, Mode, NonStationaryPolicy
from autoexplore.planning.counts import CountsTable, record_transition
from autoexplore.planning.optimistic import restricted_rows

BONUS_VARIANTS = ("bernstein", "hoeffding")

# Ações com sucesso otimista a essa distância do máximo contam como empate.
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class UcbConfig:
    """Tunings of the baseline.

    ``episodes_per_round`` fixes lambda when given; otherwise it follows
    ``episodes`` (practical: ``(L/eps)^3``, times ``log |K|^2`` with
    ``episode_log_factor``; theoretical: ``6 L^3 eps^-3 log(16 |K|^2 / delta)``).
    """

    params: AlgoParams
    horizon: int = 0
    episodes_per_round: Optional[int] = None
    bonus_variant: str = "bernstein"
    bucketed_counts: bool = False
    episode_log_factor: bool = False

    def __post_init__(self) -> None:
        if self.bonus_variant not in BONUS_VARIANTS:
            raise ValueError(f"bonus_variant deve ser um de {BONUS_VARIANTS}.")
        if not self.horizon:
            L, eps = self.params.L, self.params.epsilon
            object.__setattr__(self, "horizon", int(math.ceil(L + L * L / eps)))
        if self.horizon < 1:
            raise ValueError("horizon deve ser >= 1.")
        if self.episodes_per_round is not None and self.episodes_per_round < 1:
            raise ValueError("episodes_per_round deve ser >= 1.")

    @property
    def threshold(self) -> float:
        return self.params.L + self.params.epsilon

    def episodes(self, num_known: int) -> int:
        if self.episodes_per_round is not None:
            return self.episodes_per_round
        L, eps, delta = self.params.L, self.params.epsilon, self.params.delta
        if self.params.mode is Mode.THEORETICAL:
            return int(math.ceil(6.0 * L**3 / eps**3 * math.log(16.0 * num_known**2 / delta)))
        base = (L / eps) ** 3
        if self.episode_log_factor:
            base *= max(1.0, math.log(num_known**2))
        return int(math.ceil(base))

    def discovery_quota(self, num_states: int, num_actions: int) -> int:
        L = self.params.L
        if self.params.mode is Mode.THEORETICAL:
            return int(math.ceil(L * math.log(3.0 * num_actions * L * num_states / self.params.delta)))
        return int(math.ceil(L))


@dataclass(frozen=True, eq=False)
class HorizonPlan:
    """Optimistic ``H``-step plan towards one goal.

    ``success`` is the optimistic probability of reaching the goal within
    ``H`` steps from s0, ``truncated_time`` the smallest optimistic
    ``E[tau ^ H]`` over policies. Both bound the resetting value from below.
    """

    goal: int
    policy: NonStationaryPolicy
    success: float
    truncated_time: float

    @property
    def resetting_value(self) -> float:
        return resetting_value(self.truncated_time, 1.0 - self.success)


def _effective_counts(counts: CountsTable, members: List[int], config: UcbConfig) -> np.ndarray:
    visits = counts.n_sa[members].astype(float)
    if config.bucketed_counts:
        visits = visits / config.horizon
    return np.maximum(visits, 1.0)


def _spread(p_hat: np.ndarray, values: np.ndarray, n_eff: np.ndarray, config: UcbConfig) -> np.ndarray:
    if config.bonus_variant == "hoeffding":
        return np.sqrt(1.0 / n_eff)
    mean = p_hat @ values
    variance = np.clip(p_hat @ values**2 - mean**2, 0.0, None)
    return np.sqrt(variance / n_eff)


def finite_horizon_plan(
    counts: CountsTable,
    K: List[int],
    goal: int,
    config: UcbConfig,
    *,
    initial_state: int,
    reset_action: int,
) -> HorizonPlan:
    """Optimistic backward induction on ``K | {x, goal}`` with reward 1 on entering the goal.

    Success and truncated time are optimistic independently: the success is a
    max over actions of the clipped upper value, the time a min over actions of
    the lower value, both on the same model. The policy maximises the clipped
    success and breaks ties by the optimistic time, so fully optimistic stages
    still head for the goal.
    """
    if goal in K:
        raise ValueError("O objetivo não pode pertencer a K.")
    H = config.horizon
    members = list(K)
    k = len(members)
    meta, target = k, k + 1
    start = members.index(initial_state)
    p_hat = restricted_rows(counts.empirical_kernel(), members, goal)
    n_eff = _effective_counts(counts, members, config)
    rows = np.arange(k)

    success = np.zeros(k + 2)
    time_left = np.zeros(k + 2)
    actions = np.full((H, counts.num_states), reset_action, dtype=np.int64)
    chosen = np.zeros((H, k), dtype=np.int64)
    for h in range(H - 1, -1, -1):
        remaining = H - h - 1
        after = success.copy()
        after[target] = 1.0
        upper = p_hat @ after + _spread(p_hat, after, n_eff, config) + remaining / n_eff
        q_success = np.clip(upper, 0.0, 1.0)
        lower = 1.0 + p_hat @ time_left - _spread(p_hat, time_left, n_eff, config) - remaining / n_eff
        q_time = np.clip(lower, 1.0, float(H - h))

        top = q_success >= q_success.max(axis=1, keepdims=True) - TIE_TOLERANCE
        best = np.argmin(np.where(top, q_time, np.inf), axis=1)
        chosen[h] = best

        next_success = np.zeros(k + 2)
        next_success[:k] = q_success[rows, best]
        next_success[meta] = success[start]
        next_time = np.zeros(k + 2)
        next_time[:k] = q_time.min(axis=1)
        next_time[meta] = 1.0 + time_left[start]
        success, time_left = next_success, next_time
    actions[:, members] = chosen

    return HorizonPlan(
        goal=goal,
        policy=NonStationaryPolicy(actions),
        success=float(success[start]),
        truncated_time=float(time_left[start]),
    )


@dataclass
class UcbState:
    """Known set, candidates and pooled counts of one UcbExplore run."""

    config: UcbConfig
    counts: CountsTable
    initial_state: int
    reset_action: int
    known: List[int] = field(default_factory=list)
    policies: Dict[int, NonStationaryPolicy] = field(default_factory=dict)
    candidates: Dict[int, None] = field(default_factory=dict)
    order: Dict[int, int] = field(default_factory=dict)
    discovery_steps: Dict[int, int] = field(default_factory=dict)
    event_log: List[EventRecord] = field(default_factory=list)

    @classmethod
    def start(cls, env: MdpEnvironment, config: UcbConfig) -> "UcbState":
        s0 = env.initial_state
        state = cls(config, CountsTable.empty(env.num_states, env.num_actions), s0, env.reset_action)
        state.known.append(s0)
        state.policies[s0] = NonStationaryPolicy(
            np.full((config.horizon, env.num_states), env.reset_action, dtype=np.int64)
        )
        state.order[s0] = 0
        state.discovery_steps[s0] = 0
        return state

    def observe(self, env: MdpEnvironment, action: int) -> int:
        source = env.state
        target = env.step(action)
        record_transition(self.counts, source, action, target)
        if target not in self.order:
            self.order[target] = len(self.order)
        if target not in self.policies and target not in self.candidates:
            self.candidates[target] = None
        return target

    def log(self, kind: str, detail: str = "") -> None:
        self.event_log.append(EventRecord(self.counts.total_steps, kind, detail))


def _run_episode(run: UcbState, env: MdpEnvironment, policy: NonStationaryPolicy, goal: int) -> Optional[int]:
    """One episode from s0; returns the hitting step or ``None`` after ``H`` steps."""
    if env.state != run.initial_state:
        run.observe(env, run.reset_action)
    for h in range(policy.horizon):
        if run.observe(env, policy.action(h, env.state)) == goal:
            return h + 1
    return None


def evaluate_round(
    env: MdpEnvironment,
    run: UcbState,
    policy: NonStationaryPolicy,
    goal: int,
    episodes: int,
) -> Tuple[bool, int, int]:
    """Up to ``episodes`` trials; success iff ``q < 1`` and ``(v_H + q)/(1 - q) <= L + eps``.

    Stops early once even one-step successes in every remaining episode could
    not pass the test. ``steps_used`` also counts the RESET that brings the
    agent back to s0 before an episode, so ``n`` one-step episodes cost up to
    ``2n - 1`` steps.
    """
    H = policy.horizon
    threshold = run.config.threshold
    first_step = env.steps
    truncated_sum, failures = 0, 0
    for i in range(1, episodes + 1):
        hit = _run_episode(run, env, policy, goal)
        if hit is None:
            truncated_sum += H
            failures += 1
        else:
            truncated_sum += hit
        remaining = episodes - i
        best_case = resetting_value((truncated_sum + remaining) / episodes, failures / episodes)
        if best_case > threshold:
            return False, i, env.steps - first_step
    estimate = resetting_value(truncated_sum / episodes, failures / episodes)
    return estimate <= threshold, episodes, env.steps - first_step


def _navigate(run: UcbState, env: MdpEnvironment, s: int) -> None:
    """Reach ``s`` playing its accepted policy with a RESET every ``H`` steps."""
    if env.state == s:
        return
    if env.state != run.initial_state:
        run.observe(env, run.reset_action)
    policy = run.policies[s]
    stage = 0
    while env.state != s:
        if stage == policy.horizon:
            run.observe(env, run.reset_action)
            stage = 0
            continue
        run.observe(env, policy.action(stage, env.state))
        stage += 1


def _discover(run: UcbState, env: MdpEnvironment, s: int) -> None:
    quota = run.config.discovery_quota(env.num_states, env.num_actions)
    for a in range(env.num_actions):
        while run.counts.n_sa[s, a] < quota:
            _navigate(run, env, s)
            run.observe(env, a)


def ucb_run(env: MdpEnvironment, config: UcbConfig) -> ExplorationResult:
    """Alternate discovery and evaluation until no candidate looks reachable within ``L + eps``."""
    s0 = env.initial_state
    H = config.horizon
    run = UcbState.start(env, config)
    _discover(run, env, s0)

    rounds = 0
    while True:
        rounds += 1
        if not run.candidates:
            stop = StopReason.STOP1
            break
        plans = [
            finite_horizon_plan(
                run.counts, run.known, goal, config, initial_state=s0, reset_action=env.reset_action
            )
            for goal in run.candidates
        ]
        eligible = [plan for plan in plans if plan.resetting_value <= config.threshold]
        run.log("round", f"k={rounds - 1} |K|={len(run.known)} |U|={len(run.candidates)} elegíveis={len(eligible)}")
        if not eligible:
            stop = StopReason.STOP2
            break
        plan = min(eligible, key=lambda p: (-p.success, p.resetting_value, run.order[p.goal]))
        episodes = config.episodes(len(run.known))
        success, used, steps = evaluate_round(env, run, plan.policy, plan.goal, episodes)
        detail = f"s{plan.goal}: {used} episódios, {steps} passos"
        if not success:
            run.log("failure", detail)
            continue
        run.log("success", detail)
        run.known.append(plan.goal)
        del run.candidates[plan.goal]
        run.policies[plan.goal] = plan.policy
        run.discovery_steps[plan.goal] = run.counts.total_steps
        _discover(run, env, plan.goal)

    run.log("stop", stop.value)
    return ExplorationResult(
        algorithm="ucb",
        params=config.params,
        known=tuple(run.known),
        policies=dict(run.policies),
        counts=run.counts,
        total_steps=env.steps,
        stop_reason=stop,
        discovery_steps=dict(run.discovery_steps),
        reset_action=env.reset_action,
        event_log=run.event_log,
        rounds=rounds,
        horizon=H,
    )


__all__ = [
    "UcbConfig",
    "HorizonPlan",
    "UcbState",
    "finite_horizon_plan",
    "evaluate_round",
    "ucb_run",
]
