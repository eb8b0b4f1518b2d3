"""Value iteration for stochastic shortest-path problems with positive costs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from autoexplore.mdp.core import DeterministicPolicy, ROW_TOLERANCE
from autoexplore.mdp.graph import almost_sure_states

MAX_SWEEPS = 10_000_000
TIE_TOLERANCE = 1e-12


class ConvergenceError(RuntimeError):
    """VI_SSP não convergiu dentro do limite de iterações."""


class ImproperProblemError(ValueError):
    """Instância SSP sem política própria ou com custos inválidos."""


@dataclass(frozen=True, eq=False)
class SspProblem:
    """SSP instance over ``non_goal_states`` plus one absorbing goal.

    ``kernel`` has shape ``(n, A, n + 1)`` where column ``n`` is the goal;
    ``cost`` and ``allowed`` have shape ``(n, A)``. Only allowed actions are
    validated and used.
    """

    non_goal_states: Tuple[int, ...]
    kernel: np.ndarray
    cost: np.ndarray
    allowed: np.ndarray
    goal: int
    c_min: float = 0.0

    def __post_init__(self) -> None:
        states = tuple(int(s) for s in self.non_goal_states)
        n = len(states)
        kernel = np.array(self.kernel, dtype=float)
        cost = np.array(self.cost, dtype=float)
        allowed = np.array(self.allowed, dtype=bool)
        if kernel.ndim != 3 or kernel.shape[0] != n or kernel.shape[2] != n + 1:
            raise ImproperProblemError(f"Kernel deve ter formato ({n}, A, {n + 1}); recebido {kernel.shape}")
        num_actions = kernel.shape[1]
        if cost.shape != (n, num_actions) or allowed.shape != (n, num_actions):
            raise ImproperProblemError("cost e allowed devem ter formato (n, A).")
        if n and not allowed.any(axis=1).all():
            raise ImproperProblemError("Todo estado precisa de ao menos uma ação permitida.")
        sums = kernel.sum(axis=2)
        if np.any(np.abs(sums[allowed] - 1.0) > ROW_TOLERANCE) or np.any(kernel < 0.0):
            raise ImproperProblemError("Linhas do kernel devem ser distribuições de probabilidade.")
        c_min = float(self.c_min) if self.c_min else (float(cost[allowed].min()) if n else 1.0)
        if not c_min > 0.0:
            raise ImproperProblemError(f"c_min deve ser positivo (recebido {c_min}).")
        if n and (np.any(cost[allowed] < c_min - ROW_TOLERANCE) or np.any(cost[allowed] > 1.0 + ROW_TOLERANCE)):
            raise ImproperProblemError(f"Custos devem estar em [{c_min}, 1].")

        support = np.zeros((n + 1, num_actions, n + 1), dtype=bool)
        support[:n] = kernel > 0.0
        support[n, :, n] = True
        permitted = np.vstack([allowed, np.ones((1, num_actions), dtype=bool)])
        goal_mask = np.zeros(n + 1, dtype=bool)
        goal_mask[n] = True
        proper, _ = almost_sure_states(support, permitted, goal_mask)
        if not proper.all():
            missing = [states[i] for i in np.flatnonzero(~proper[:n])]
            raise ImproperProblemError(f"Objetivo inalcançável com probabilidade 1 a partir de {missing}.")

        for array in (kernel, cost, allowed):
            array.setflags(write=False)
        object.__setattr__(self, "non_goal_states", states)
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "allowed", allowed)
        object.__setattr__(self, "goal", int(self.goal))
        object.__setattr__(self, "c_min", c_min)

    @property
    def size(self) -> int:
        return len(self.non_goal_states)

    @property
    def num_actions(self) -> int:
        return self.kernel.shape[1]

    @property
    def actions_of(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(a) for a in np.flatnonzero(row)) for row in self.allowed)

    @classmethod
    def from_actions(
        cls,
        non_goal_states: Sequence[int],
        actions_of: Sequence[Iterable[int]],
        cost: np.ndarray,
        kernel: np.ndarray,
        goal: int,
    ) -> "SspProblem":
        allowed = np.zeros(np.shape(cost), dtype=bool)
        for i, actions in enumerate(actions_of):
            allowed[i, list(actions)] = True
        return cls(tuple(non_goal_states), kernel, cost, allowed, goal)


@dataclass(frozen=True, eq=False)
class ValueVector:
    """Values over ``states`` (same order as the problem's non-goal states)."""

    u: np.ndarray
    states: Tuple[int, ...]

    def at(self, state: int) -> float:
        return float(self.u[self.states.index(state)])


def q_values(problem: SspProblem, u: np.ndarray) -> np.ndarray:
    n = problem.size
    q = problem.cost + problem.kernel[:, :, :n] @ u
    return np.where(problem.allowed, q, np.inf)


def bellman_backup(problem: SspProblem, u: np.ndarray) -> np.ndarray:
    """One synchronous application of ``Lu(s) = min_a c(s,a) + sum p(s'|s,a) u(s')``."""
    return q_values(problem, u).min(axis=1)


def greedy_actions(q: np.ndarray) -> np.ndarray:
    """Argmin per row; ties resolved towards the lowest action index."""
    best = q.min(axis=1, keepdims=True)
    ties = q <= best + TIE_TOLERANCE * np.maximum(1.0, np.abs(best))
    return np.argmax(ties, axis=1)


def vi_ssp(
    problem: SspProblem,
    gamma: float,
    *,
    max_sweeps: int = MAX_SWEEPS,
) -> Tuple[ValueVector, DeterministicPolicy]:
    """Run VI from ``u = 0`` until ``||u_{j+1} - u_j||_inf <= gamma``."""
    if not gamma > 0.0:
        raise ValueError("gamma deve ser positivo.")
    n = problem.size
    if n == 0:
        return ValueVector(np.zeros(0), ()), DeterministicPolicy(np.zeros(0, dtype=np.int64))
    u = np.zeros(n)
    for _ in range(max_sweeps):
        u_next = bellman_backup(problem, u)
        if np.max(np.abs(u_next - u)) <= gamma:
            actions = greedy_actions(q_values(problem, u_next))
            return ValueVector(u_next, problem.non_goal_states), DeterministicPolicy(actions)
        u = u_next
    raise ConvergenceError(
        f"VI_SSP não convergiu em {max_sweeps} iterações (gamma={gamma}); verifique a instância."
    )
