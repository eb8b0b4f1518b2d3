"""Testes dos fluxos de experimento: presets YAML, validação e execução semeada."""

from __future__ import annotations

from pathlib import Path

import pytest

from autoexplore.analysis import incrementally_controllable_set, optimal_shortest_path
from autoexplore.envs import make_deterministic_chain
from autoexplore.mdp.core import AlgoParams
from autoexplore.reporting import AxFlags, RunRecord
from autoexplore.workflows import (
    ExperimentSpec,
    InvalidExperimentError,
    build_oracle,
    load_environment,
    load_experiment_config,
    override_spec,
    parse_env_params,
    run_experiment,
    run_single,
    spec_from_mapping,
    verify_ax,
)

ROOT = Path(__file__).resolve().parents[1]
SMOKE_PARAMS = AlgoParams(L=2, epsilon=0.5, delta=0.1)


def _chain_spec(algo: str = "disco", **extra: object) -> ExperimentSpec:
    return ExperimentSpec(env="chain", algo=algo, params=SMOKE_PARAMS, env_params={"n": 2}, seeds=3, **extra)


def test_load_experiment_config_applies_defaults(tmp_path: Path) -> None:
    config_path = tmp_path / "experiments.yaml"
    config_path.write_text(
        """
experiments:
  defaults:
    L: 3
    delta: 0.05
    seeds: 4
  presets:
    - name: lock
      env: combination-lock
      algo: disco
      eps: 0.2
      env_params:
        N: 6
      tunings:
        theta: max
    - name: lock-ucb
      env: combination-lock
      algo: ucb
      eps: 0.2
      seeds: 2
      tunings:
        bonus_variant: hoeffding
""".strip(),
        encoding="utf-8",
    )

    specs = load_experiment_config(config_path)

    assert set(specs) == {"lock", "lock-ucb"}
    assert specs["lock"].params.L == 3.0
    assert specs["lock"].params.delta == 0.05
    assert specs["lock"].params.theta == "max"
    assert specs["lock"].env_params == {"N": 6}
    assert specs["lock"].seeds == 4
    assert specs["lock-ucb"].seeds == 2
    assert specs["lock-ucb"].seed_list() == [0, 1]


def test_repository_presets_are_valid() -> None:
    specs = load_experiment_config(ROOT / "config" / "experiments.yaml")

    assert specs["confusing-chain-disco-eps01"].params.L == 4.5
    assert specs["confusing-chain-ucb-eps01"].tunings["bucketed_counts"] is True
    assert specs["combination-lock-disco"].params.theta == "max"
    assert specs["chain-smoke-disco"].env_params == {"n": 2}


def test_load_experiment_config_missing_file(tmp_path: Path) -> None:
    with pytest.raises(FileNotFoundError):
        load_experiment_config(tmp_path / "nope.yaml")


@pytest.mark.parametrize(
    "entry, message",
    [
        ({"env": "chain", "algo": "sarsa", "L": 2, "eps": 0.5}, "não suportado"),
        ({"env": "grid", "algo": "disco", "L": 2, "eps": 0.5}, "desconhecido"),
        ({"algo": "disco", "L": 2, "eps": 0.5}, "env"),
        ({"env": "chain", "algo": "disco", "L": 0.5, "eps": 0.5}, "L deve ser"),
        ({"env": "chain", "algo": "disco", "L": 2, "eps": 0.5, "seeds": 0}, "seeds"),
        ({"env": "chain", "algo": "ucb", "L": 2, "eps": 0.5, "tunings": {"theta": "max"}}, "Ajustes"),
        ({"env": "chain", "algo": "disco", "L": "longo", "eps": 0.5}, "Preset inválido"),
    ],
)
def test_spec_from_mapping_rejects_invalid_entries(entry: dict, message: str) -> None:
    with pytest.raises(InvalidExperimentError, match=message):
        spec_from_mapping(entry)


def test_parse_env_params_casts_values() -> None:
    assert parse_env_params(["N=6", "p_c=0.9", "tag = lock"]) == {"N": 6, "p_c": 0.9, "tag": "lock"}
    assert parse_env_params(None) == {}
    with pytest.raises(InvalidExperimentError):
        parse_env_params(["N"])


def test_load_environment_maps_errors() -> None:
    assert load_environment("chain", {"n": 3}).num_states == 3
    with pytest.raises(InvalidExperimentError, match="desconhecido"):
        load_environment("grid")
    with pytest.raises(InvalidExperimentError, match="Parâmetros inválidos"):
        load_environment("combination-lock", {"N": 1})


def test_override_spec_ignores_missing_values() -> None:
    spec = _chain_spec()

    changed = override_spec(spec, seeds=5, algo=None)

    assert changed.seeds == 5
    assert changed.algo == "disco"
    with pytest.raises(InvalidExperimentError):
        override_spec(spec, algo="sarsa")


@pytest.mark.parametrize("algo", ["disco", "ucb"])
def test_run_experiment_on_chain(algo: str, capsys: pytest.CaptureFixture[str]) -> None:
    records = run_experiment(_chain_spec(algo), show_progress=True)

    assert [record.seed for record in records] == [0, 1, 2]
    for record in records:
        assert record.ok
        assert record.known == (0, 1)
        assert record.stop_reason == "STOP1"
        assert record.hitting_times == pytest.approx({0: 0.0, 1: 1.0})
        assert record.flags == AxFlags(True, True, True)
        assert record.curve[-1][1] == 1.0
        assert record.counts is not None
    assert "3 sementes" in capsys.readouterr().out


def test_run_single_turns_failures_into_records() -> None:
    spec = _chain_spec(tunings={"max_steps": 1})
    mdp = make_deterministic_chain(2)

    record = run_single(spec, mdp, 7, build_oracle(mdp, SMOKE_PARAMS))

    assert not record.ok
    assert record.stop_reason == "ERROR"
    assert record.error.startswith("StepBudgetExceeded")


def test_verify_ax_flags() -> None:
    mdp = make_deterministic_chain(2)
    oracle = build_oracle(mdp, SMOKE_PARAMS)
    good = RunRecord(seed=0, algorithm="disco", known=(0, 1), hitting_times={0: 0.0, 1: 1.0})
    slow = RunRecord(seed=1, algorithm="disco", known=(0, 1), hitting_times={0: 0.0, 1: 2.4})
    partial = RunRecord(seed=2, algorithm="disco", known=(0,), hitting_times={0: 0.0})
    broken = RunRecord(seed=3, algorithm="disco", known=(0, 1), hitting_times={0: 0.0})

    assert oracle.incremental == frozenset({0, 1})
    assert oracle.restricted_values[1] == pytest.approx(optimal_shortest_path(mdp, {0, 1}, 1)[0].at(0))
    assert verify_ax(good, mdp, SMOKE_PARAMS, oracle) == AxFlags(True, True, True)
    # 2.4 <= L + eps, mas acima de V* + eps = 1.5
    assert verify_ax(slow, mdp, SMOKE_PARAMS, oracle) == AxFlags(True, False, False)
    assert verify_ax(partial, mdp, SMOKE_PARAMS, oracle) == AxFlags(False, False, False)
    with pytest.raises(ValueError, match="sem tempo"):
        verify_ax(broken, mdp, SMOKE_PARAMS, oracle)


@pytest.mark.slow
def test_parallel_runs_match_sequential_runs() -> None:
    spec = _chain_spec()

    sequential = run_experiment(spec, workers=1)
    parallel = run_experiment(spec, workers=2)

    assert [r.sample_complexity for r in sequential] == [r.sample_complexity for r in parallel]
    assert [r.known for r in sequential] == [r.known for r in parallel]


DISCO_CHAIN_MEANS = {"08": 9_891, "06": 15_349, "04": 29_160, "02": 105_569}


@pytest.mark.slow
@pytest.mark.parametrize("suffix, expected", sorted(DISCO_CHAIN_MEANS.items()))
def test_disco_confusing_chain_table(suffix: str, expected: int) -> None:
    spec = load_experiment_config(ROOT / "config" / "experiments.yaml")[f"confusing-chain-disco-eps{suffix}"]
    mdp = load_environment(spec.env, spec.env_params)
    oracle = build_oracle(mdp, spec.params)
    widest = incrementally_controllable_set(mdp, spec.params.L + spec.params.epsilon)

    records = run_experiment(spec, oracle=oracle)

    assert len(records) == 50 and all(record.ok for record in records)
    mean = sum(record.sample_complexity for record in records) / len(records)
    assert abs(mean - expected) <= 0.3 * expected
    for record in records:
        assert oracle.incremental <= set(record.known) <= widest
        # s5 vem de s1 pelo salto: 1 + 3 passos
        assert [record.hitting_times[s] for s in range(6)] == pytest.approx([0, 1, 2, 3, 4, 4], abs=1e-6)
    assert sum(record.flags.ax_star for record in records) >= 0.9 * len(records)


@pytest.mark.slow
def test_disco_combination_lock_table() -> None:
    spec = load_experiment_config(ROOT / "config" / "experiments.yaml")["combination-lock-disco"]

    records = run_experiment(spec)

    assert len(records) == 20 and all(record.ok for record in records)
    mean = sum(record.sample_complexity for record in records) / len(records)
    assert abs(mean - 30_117) <= 0.3 * 30_117
    assert all(set(record.known) == {2, 3, 4, 5} for record in records)
