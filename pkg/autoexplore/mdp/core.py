"""Tabular MDP primitives shared by planners, oracles and agents."""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional

import numpy as np

# Valor de uma política imprópria (o objetivo nunca é atingido com probabilidade 1).
INFINITE = math.inf

ROW_TOLERANCE = 1e-12


class InvalidMdpError(ValueError):
    """Erro disparado quando o kernel de transição viola os invariantes do MDP."""


class Mode(str, Enum):
    THEORETICAL = "theoretical"
    PRACTICAL = "practical"


@dataclass(frozen=True, eq=False)
class TabularMdp:
    """Reward-free finite MDP with a designated initial state and a RESET action.

    ``transition`` has shape ``(S, A, S)``. When ``reset_action`` is omitted the
    last action index is used, which is how every bundled environment lays out
    its actions.
    """

    transition: np.ndarray
    initial_state: int = 0
    reset_action: Optional[int] = None
    _cdf: List[List[List[float]]] = field(init=False, repr=False)
    _last_support: List[List[int]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        kernel = np.array(self.transition, dtype=float)
        if kernel.ndim != 3 or kernel.shape[0] != kernel.shape[2]:
            raise InvalidMdpError(f"Kernel deve ter formato (S, A, S); recebido {kernel.shape}")
        num_states, num_actions, _ = kernel.shape
        if num_states < 1 or num_actions < 1:
            raise InvalidMdpError("MDP precisa de ao menos um estado e uma ação.")
        reset = num_actions - 1 if self.reset_action is None else int(self.reset_action)
        if not 0 <= reset < num_actions:
            raise InvalidMdpError(f"Ação RESET fora do intervalo: {reset}")
        s0 = int(self.initial_state)
        if not 0 <= s0 < num_states:
            raise InvalidMdpError(f"Estado inicial fora do intervalo: {s0}")
        if np.any(kernel < 0.0) or np.any(kernel > 1.0):
            raise InvalidMdpError("Probabilidades devem estar em [0, 1].")
        sums = kernel.sum(axis=2)
        bad = np.argwhere(np.abs(sums - 1.0) > ROW_TOLERANCE)
        if bad.size:
            s, a = (int(v) for v in bad[0])
            raise InvalidMdpError(f"Linha p(.|{s},{a}) soma {sums[s, a]!r} (esperado 1)")
        if not np.all(kernel[:, reset, s0] == 1.0):
            raise InvalidMdpError("RESET deve levar a s0 com probabilidade 1 a partir de todo estado.")

        kernel.setflags(write=False)
        cumulative = np.cumsum(kernel, axis=2)
        object.__setattr__(self, "transition", kernel)
        object.__setattr__(self, "initial_state", s0)
        object.__setattr__(self, "reset_action", reset)
        object.__setattr__(self, "_cdf", cumulative.tolist())
        object.__setattr__(
            self,
            "_last_support",
            [[int(np.flatnonzero(kernel[s, a])[-1]) for a in range(num_actions)] for s in range(num_states)],
        )

    @property
    def num_states(self) -> int:
        return self.transition.shape[0]

    @property
    def num_actions(self) -> int:
        return self.transition.shape[1]

    def support(self) -> np.ndarray:
        """Boolean ``(S, A, S)`` mask of positive transitions."""
        return self.transition > 0.0


@dataclass(frozen=True, eq=False)
class DeterministicPolicy:
    """Stationary state-to-action map."""

    action_of: np.ndarray

    def __post_init__(self) -> None:
        actions = np.array(self.action_of, dtype=np.int64).reshape(-1)
        if np.any(actions < 0):
            raise ValueError("Ações devem ser índices não negativos.")
        actions.setflags(write=False)
        object.__setattr__(self, "action_of", actions)

    def __call__(self, s: int) -> int:
        return int(self.action_of[s])

    def __len__(self) -> int:
        return int(self.action_of.shape[0])

    @classmethod
    def constant(cls, num_states: int, action: int) -> "DeterministicPolicy":
        return cls(np.full(num_states, action, dtype=np.int64))

    def check(self, num_actions: int) -> None:
        if np.any(self.action_of >= num_actions):
            raise ValueError(f"Política usa ação fora de [0, {num_actions}).")

    def restricted(self, states: Iterable[int], reset_action: int) -> "DeterministicPolicy":
        """Copy that plays ``reset_action`` outside ``states``."""
        keep = np.zeros(len(self), dtype=bool)
        keep[list(states)] = True
        return DeterministicPolicy(np.where(keep, self.action_of, reset_action))

    def is_restricted_on(self, states: Iterable[int], reset_action: int) -> bool:
        outside = np.ones(len(self), dtype=bool)
        outside[list(states)] = False
        return bool(np.all(self.action_of[outside] == reset_action))


@dataclass(frozen=True, eq=False)
class NonStationaryPolicy:
    """Stage-indexed policy; ``action_of[h, s]`` is played at stage ``h`` (0-based)."""

    action_of: np.ndarray

    def __post_init__(self) -> None:
        table = np.array(self.action_of, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] < 1:
            raise ValueError("Política não estacionária precisa de formato (H, S) com H >= 1.")
        table.setflags(write=False)
        object.__setattr__(self, "action_of", table)

    @property
    def horizon(self) -> int:
        return int(self.action_of.shape[0])

    def action(self, h: int, s: int) -> int:
        return int(self.action_of[h, s])

    @classmethod
    def from_stationary(cls, policy: DeterministicPolicy, horizon: int) -> "NonStationaryPolicy":
        return cls(np.tile(policy.action_of, (horizon, 1)))


@dataclass(frozen=True, eq=False)
class HittingValues:
    """Expected costs-to-goal per state; ``INFINITE`` marks improper states."""

    value: np.ndarray
    goal: int

    def __post_init__(self) -> None:
        values = np.array(self.value, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "value", values)

    def at(self, s: int) -> float:
        return float(self.value[s])

    def is_proper(self, s: int) -> bool:
        return bool(np.isfinite(self.value[s]))


@dataclass(frozen=True)
class AlgoParams:
    """Exploration length ``L``, accuracy ``epsilon`` and confidence ``delta``.

    ``epsilon`` above 1 is clamped to 1. ``theta`` picks the Practical-mode
    variance statistic: per state-action pair (``"pair"``) or the max over pairs.
    """

    L: float
    epsilon: float
    delta: float
    mode: Mode = Mode.PRACTICAL
    theta: str = "pair"

    def __post_init__(self) -> None:
        if not self.L >= 1.0:
            raise ValueError(f"L deve ser >= 1 (recebido {self.L}).")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon deve ser positivo (recebido {self.epsilon}).")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta deve estar em (0, 1) (recebido {self.delta}).")
        if self.theta not in {"pair", "max"}:
            raise ValueError("theta deve ser 'pair' ou 'max'.")
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "epsilon", min(float(self.epsilon), 1.0))
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "mode", Mode(self.mode))


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator used by every run (Philox, fixed for reproducibility)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def sample_transition(mdp: TabularMdp, s: int, a: int, rng: np.random.Generator) -> int:
    """Draw ``s'`` from ``p(.|s,a)`` by inverse CDF over the row in index order."""
    cdf = mdp._cdf[s][a]
    u = rng.random()
    nxt = bisect_right(cdf, u)
    last = mdp._last_support[s][a]
    return nxt if nxt < last else last


__all__ = [
    "INFINITE",
    "InvalidMdpError",
    "Mode",
    "TabularMdp",
    "DeterministicPolicy",
    "NonStationaryPolicy",
    "HittingValues",
    "AlgoParams",
    "make_rng",
    "sample_transition",
]
