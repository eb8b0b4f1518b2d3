"""Shared pieces of the exploration agents: environment wrapper, events and results."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from autoexplore.mdp.core import (
    AlgoParams,
    DeterministicPolicy,
    NonStationaryPolicy,
    TabularMdp,
    sample_transition,
)
from autoexplore.planning.counts import CountsTable

MAX_STEPS = 1_000_000_000
CURVE_EVERY = 100

AgentPolicy = Union[DeterministicPolicy, NonStationaryPolicy]


class StepBudgetExceeded(RuntimeError):
    """Execução ultrapassou o limite de passos no ambiente."""


class StopReason(str, Enum):
    STOP1 = "STOP1"
    STOP2 = "STOP2"


class MdpEnvironment:
    """Stateful sampler over a ``TabularMdp``.

    Agents only see the current state, the sizes and the RESET index; the
    kernel stays behind ``step``.
    """

    def __init__(self, mdp: TabularMdp, rng: np.random.Generator, *, max_steps: int = MAX_STEPS) -> None:
        self._mdp = mdp
        self._rng = rng
        self.max_steps = int(max_steps)
        self.state = mdp.initial_state
        self.steps = 0

    @property
    def num_states(self) -> int:
        return self._mdp.num_states

    @property
    def num_actions(self) -> int:
        return self._mdp.num_actions

    @property
    def initial_state(self) -> int:
        return self._mdp.initial_state

    @property
    def reset_action(self) -> int:
        return self._mdp.reset_action

    def step(self, action: int) -> int:
        if self.steps >= self.max_steps:
            raise StepBudgetExceeded(
                f"Limite de {self.max_steps:,} passos atingido no estado {self.state} (ação {action})."
            )
        self.state = sample_transition(self._mdp, self.state, action, self._rng)
        self.steps += 1
        return self.state


@dataclass(frozen=True)
class EventRecord:
    step: int
    kind: str
    detail: str = ""


@dataclass
class ExplorationResult:
    """Output of an exploration run.

    ``known`` keeps discovery order (s0 first). ``horizon`` is set when the
    policies are stage-indexed and meant to be played with a RESET every
    ``horizon`` steps.
    """

    algorithm: str
    params: AlgoParams
    known: Tuple[int, ...]
    policies: Dict[int, AgentPolicy]
    counts: CountsTable
    total_steps: int
    stop_reason: StopReason
    discovery_steps: Dict[int, int]
    reset_action: int
    event_log: List[EventRecord] = field(default_factory=list)
    rounds: int = 0
    horizon: Optional[int] = None

    @property
    def discovery_curve(self) -> List[Tuple[int, int]]:
        """``(step, |K|)`` after each transfer."""
        ordered = sorted(self.discovery_steps.values())
        return [(step, size) for size, step in enumerate(ordered, start=1)]

    def sampled_curve(self, tracked: Iterable[int], every: int = CURVE_EVERY) -> List[Tuple[int, int]]:
        """``(step, |K ∩ tracked|)`` every ``every`` steps, closing at ``total_steps``."""
        wanted = set(tracked)
        tracked_steps = np.array(
            sorted(step for state, step in self.discovery_steps.items() if state in wanted), dtype=np.int64
        )
        grid = list(range(0, self.total_steps + 1, every))
        if grid[-1] != self.total_steps:
            grid.append(self.total_steps)
        counts = np.searchsorted(tracked_steps, np.asarray(grid), side="right")
        return [(int(step), int(count)) for step, count in zip(grid, counts)]
