from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from autoexplore.analysis import optimal_shortest_path
from autoexplore.envs import (
    UnknownEnvironmentError,
    make_combination_lock,
    make_confusing_chain,
    make_environment,
    make_layered_star,
)
from autoexplore.mdp.io import write_mdp


def test_combination_lock_left_action_uses_harmonic_weights() -> None:
    mdp = make_combination_lock(6)

    assert mdp.initial_state == 3
    assert mdp.num_actions == 3
    assert mdp.transition[3, 0, :3] == pytest.approx([2.0 / 11.0, 3.0 / 11.0, 6.0 / 11.0])
    assert mdp.transition[5, 1, 5] == 1.0
    assert mdp.transition[0, 0, 0] == 1.0


def test_confusing_chain_rows() -> None:
    mdp = make_confusing_chain()

    assert (mdp.num_states, mdp.num_actions) == (12, 3)
    assert mdp.transition[0, 1, 6:] == pytest.approx(np.full(6, 1.0 / 6.0))
    assert mdp.transition[2, 1, 5] == pytest.approx(1.0 / 3.0)
    assert mdp.transition[2, 1, 2] == pytest.approx(2.0 / 3.0)
    assert np.all(mdp.transition[6:, :2, 5] == 1.0)
    assert np.all(mdp.transition[5, :2, 0] == 1.0)
    assert np.all(mdp.transition[:, 2, 0] == 1.0)


def test_confusing_chain_with_unreliable_forward_action() -> None:
    mdp = make_confusing_chain(p_c=0.9)

    assert mdp.transition[1, 0, 2] == pytest.approx(0.9)
    assert mdp.transition[1, 0, 1] == pytest.approx(0.1)


def test_layered_star_reaches_final_state_in_three_steps() -> None:
    mdp = make_layered_star()

    values, _ = optimal_shortest_path(mdp, range(mdp.num_states), 7)

    assert values.at(0) == pytest.approx(3.0)


def test_make_environment_by_name_and_parameters() -> None:
    mdp = make_environment("combination-lock", {"N": 9})

    assert mdp.num_states == 9
    assert mdp.initial_state == 5


def test_make_environment_from_file(tmp_path: Path) -> None:
    path = tmp_path / "lock.mdp"
    write_mdp(make_combination_lock(6), path)

    mdp = make_environment(f"file:{path}")

    assert np.array_equal(mdp.transition, make_combination_lock(6).transition)


def test_make_environment_errors(tmp_path: Path) -> None:
    with pytest.raises(UnknownEnvironmentError, match="desconhecido"):
        make_environment("grid-world")
    with pytest.raises(UnknownEnvironmentError, match="Parâmetros"):
        make_environment("chain", {"size": 3})
    with pytest.raises(FileNotFoundError):
        make_environment(f"file:{tmp_path / 'missing.mdp'}")
    with pytest.raises(ValueError):
        make_environment("combination-lock", {"N": 1})
