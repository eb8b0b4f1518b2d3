"""Finite-horizon truncation of hitting times and the resetting identity."""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from autoexplore.analysis.hitting import AnyPolicy, stage_action
from autoexplore.mdp.core import INFINITE, TabularMdp


def effective_horizon(L: float, epsilon: float) -> int:
    """``4(L+1) * ceil(ln(4(L+1)/epsilon))`` rounded up."""
    if L < 1 or not 0 < epsilon <= 1:
        raise ValueError("Requer L >= 1 e epsilon em (0, 1].")
    scale = 4.0 * (L + 1.0)
    return int(math.ceil(scale * math.ceil(math.log(scale / epsilon))))


def resetting_value(v_h: float, q_h: float) -> float:
    if q_h >= 1.0:
        return INFINITE
    return (v_h + q_h) / (1.0 - q_h)


def truncated_value_tail(
    mdp: TabularMdp,
    policy: AnyPolicy,
    goal: int,
    H: int,
) -> Tuple[float, float, float]:
    """Return ``(E[tau ^ H], P(tau > H), resetting value)`` from s0.

    ``policy`` may be stationary or stage-indexed (stage 0 is the first step).
    """
    if H < 1:
        raise ValueError("H deve ser >= 1.")
    states = np.arange(mdp.num_states)
    time_left = np.zeros(mdp.num_states)
    tail = np.ones(mdp.num_states)
    tail[goal] = 0.0
    for h in range(H - 1, -1, -1):
        chain = mdp.transition[states, stage_action(policy, h), :]
        time_left = 1.0 + chain @ time_left
        tail = chain @ tail
        time_left[goal] = 0.0
        tail[goal] = 0.0
    s0 = mdp.initial_state
    v_h, q_h = float(time_left[s0]), float(min(max(tail[s0], 0.0), 1.0))
    return v_h, q_h, resetting_value(v_h, q_h)
