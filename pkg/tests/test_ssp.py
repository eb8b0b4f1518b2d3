from __future__ import annotations

import numpy as np
import pytest

from autoexplore.analysis import absorption_costs
from autoexplore.mdp.core import make_rng
from autoexplore.planning import (
    ConvergenceError,
    ImproperProblemError,
    SspProblem,
    bellman_backup,
    greedy_actions,
    q_values,
    vi_ssp,
)


def _single_state(kernel_row: list, cost_row: list) -> SspProblem:
    kernel = np.array([kernel_row], dtype=float)
    cost = np.array([cost_row], dtype=float)
    return SspProblem((0,), kernel, cost, np.ones_like(cost, dtype=bool), goal=1)


def test_single_state_one_step_to_goal() -> None:
    problem = _single_state([[0.0, 1.0]], [1.0])

    values, policy = vi_ssp(problem, 1e-10)

    assert values.at(0) == 1.0
    assert policy(0) == 0


def test_cheap_self_loop_beats_direct_action() -> None:
    # a0: custo 0.4 e meio a meio entre ficar e chegar; a1: custo 1 direto
    problem = _single_state([[0.5, 0.5], [0.0, 1.0]], [0.4, 1.0])

    values, policy = vi_ssp(problem, 1e-10)

    assert problem.c_min == pytest.approx(0.4)
    assert values.at(0) == pytest.approx(0.8, abs=1e-8)
    assert policy(0) == 0


def test_bellman_iterates_are_monotone_from_zero() -> None:
    kernel = np.zeros((2, 2, 3))
    kernel[0, 0] = [0.2, 0.5, 0.3]
    kernel[0, 1] = [0.0, 0.0, 1.0]
    kernel[1, 0] = [0.6, 0.0, 0.4]
    kernel[1, 1] = [0.0, 0.9, 0.1]
    cost = np.array([[0.5, 1.0], [0.7, 0.5]])
    problem = SspProblem((0, 1), kernel, cost, np.ones((2, 2), dtype=bool), goal=2)

    u = np.zeros(2)
    for _ in range(50):
        u_next = bellman_backup(problem, u)
        assert np.all(u_next >= u - 1e-15)
        u = u_next


def test_from_actions_restricts_choices() -> None:
    kernel = np.array([[[0.0, 1.0], [1.0, 0.0]]])
    problem = SspProblem.from_actions([4], [[0]], np.array([[1.0, 1.0]]), kernel, goal=7)

    values, policy = vi_ssp(problem, 1e-6)

    assert problem.actions_of == ((0,),)
    assert values.at(4) == 1.0
    assert policy(0) == 0


def test_improper_problem_is_rejected() -> None:
    with pytest.raises(ImproperProblemError, match="inalcançável"):
        _single_state([[1.0, 0.0]], [1.0])


@pytest.mark.parametrize(
    "kernel_row, cost_row",
    [
        ([[0.5, 0.4]], [1.0]),
        ([[0.0, 1.0]], [1.5]),
        ([[0.0, 1.0]], [0.0]),
    ],
)
def test_invalid_rows_and_costs_are_rejected(kernel_row: list, cost_row: list) -> None:
    with pytest.raises(ImproperProblemError):
        _single_state(kernel_row, cost_row)


def test_kernel_shape_is_checked() -> None:
    with pytest.raises(ImproperProblemError, match="formato"):
        SspProblem((0,), np.ones((1, 1, 1)), np.ones((1, 1)), np.ones((1, 1), dtype=bool), goal=1)


def test_vi_ssp_raises_when_sweeps_run_out() -> None:
    problem = _single_state([[0.5, 0.5], [0.0, 1.0]], [0.4, 1.0])

    with pytest.raises(ConvergenceError):
        vi_ssp(problem, 1e-10, max_sweeps=1)


def test_vi_ssp_requires_positive_gamma() -> None:
    problem = _single_state([[0.0, 1.0]], [1.0])

    with pytest.raises(ValueError):
        vi_ssp(problem, 0.0)


def test_empty_problem_has_no_values() -> None:
    problem = SspProblem((), np.zeros((0, 2, 1)), np.zeros((0, 2)), np.zeros((0, 2), dtype=bool), goal=3)

    values, policy = vi_ssp(problem, 1e-6)

    assert values.u.size == 0
    assert len(policy) == 0


def _random_problem(rng: np.random.Generator) -> SspProblem:
    n, A = int(rng.integers(1, 6)), int(rng.integers(1, 4))
    to_goal = rng.uniform(0.05, 0.5, size=(n, A))
    kernel = np.zeros((n, A, n + 1))
    kernel[:, :, :n] = rng.dirichlet(np.ones(n), size=(n, A)) * (1.0 - to_goal)[:, :, None]
    kernel[:, :, n] = to_goal
    c_min = float(rng.uniform(0.2, 1.0))
    cost = rng.uniform(c_min, 1.0, size=(n, A))
    return SspProblem(tuple(range(n)), kernel, cost, np.ones((n, A), dtype=bool), goal=n, c_min=c_min)


def _policy_value(problem: SspProblem, actions: np.ndarray) -> np.ndarray:
    n = problem.size
    rows = np.arange(n)
    chain = np.zeros((n + 1, n + 1))
    chain[:n] = problem.kernel[rows, actions]
    chain[n, n] = 1.0
    step = np.append(problem.cost[rows, actions], 0.0)
    targets = np.zeros(n + 1, dtype=bool)
    targets[n] = True
    return absorption_costs(chain, step, targets)[:n]


def _optimal_value(problem: SspProblem, actions: np.ndarray) -> np.ndarray:
    """Iteração de política a partir de ``actions``; toda ação chega ao objetivo."""
    for _ in range(100):
        value = _policy_value(problem, actions)
        improved = greedy_actions(q_values(problem, value))
        if np.array_equal(improved, actions):
            return value
        actions = improved
    raise AssertionError("iteração de política não estabilizou")


def test_vi_ssp_values_sandwich_optimum_on_random_problems() -> None:
    rng = make_rng(42)

    for _ in range(200):
        problem = _random_problem(rng)
        gamma = float(rng.uniform(1e-4, problem.c_min / 2.0))

        values, policy = vi_ssp(problem, gamma)
        optimum = _optimal_value(problem, policy.action_of)
        greedy = _policy_value(problem, policy.action_of)

        assert np.all(values.u <= optimum + 1e-9)
        assert np.all(optimum <= greedy + 1e-9)
        assert np.all(greedy <= (1.0 + 2.0 * gamma / problem.c_min) * values.u + 1e-9)
