"""Testes dos comandos do manage.py (run, oracle, verify, plan, export-env)."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
from typer.testing import CliRunner

from autoexplore.cli import EXIT_INVALID, EXIT_RUN_FAILURE
from autoexplore.envs import make_combination_lock, make_deterministic_chain
from autoexplore.mdp.io import parse_mdp
from autoexplore.planning import CountsTable, write_counts
from manage import app

runner = CliRunner()

CHAIN_RUN = ["run", "--env", "chain", "--env-param", "n=2", "--algo", "disco", "--L", "2", "--eps", "0.5"]


def _chain_counts(path: Path) -> Path:
    mdp = make_deterministic_chain(3)
    n_sas = (mdp.transition * 10).astype(np.int64)
    write_counts(CountsTable(n_sas, n_sas.sum(axis=2), int(n_sas.sum())), path)
    return path


def test_run_writes_csvs_and_counts(tmp_path: Path) -> None:
    result = runner.invoke(app, CHAIN_RUN + ["--seeds", "2", "--out-dir", str(tmp_path), "--save-counts", "--quiet"])

    assert result.exit_code == 0, result.output
    assert "AX_L 2/2" in result.output
    runs = pd.read_csv(tmp_path / "runs.csv")
    assert runs["seed"].tolist() == [0, 1]
    assert runs["stop_reason"].tolist() == ["STOP1", "STOP1"]
    assert (tmp_path / "summary.csv").exists()
    assert (tmp_path / "curve.csv").exists()
    assert (tmp_path / "counts_seed1.txt").read_text(encoding="utf-8").startswith("# disco em chain, seed 1")


def test_run_with_preset_and_override(tmp_path: Path) -> None:
    config_path = tmp_path / "experiments.yaml"
    config_path.write_text(
        "experiments:\n  presets:\n    - name: smoke\n      env: chain\n      algo: ucb\n      L: 2\n      eps: 0.5\n      seeds: 3\n",
        encoding="utf-8",
    )

    result = runner.invoke(
        app,
        ["run", "--preset", "smoke", "--config", str(config_path), "--seeds", "1", "--out-dir", str(tmp_path)],
    )

    assert result.exit_code == 0, result.output
    assert pd.read_csv(tmp_path / "runs.csv")["seed"].tolist() == [0]


def test_run_rejects_invalid_specifications(tmp_path: Path) -> None:
    unknown_env = runner.invoke(
        app, ["run", "--env", "grid", "--algo", "disco", "--L", "2", "--eps", "0.5", "--out-dir", str(tmp_path)]
    )
    missing_flags = runner.invoke(app, ["run", "--env", "chain", "--algo", "disco", "--out-dir", str(tmp_path)])
    missing_preset = runner.invoke(
        app, ["run", "--preset", "nada", "--config", str(tmp_path / "none.yaml"), "--out-dir", str(tmp_path)]
    )

    assert unknown_env.exit_code == EXIT_INVALID
    assert "desconhecido" in unknown_env.output
    assert missing_flags.exit_code == EXIT_INVALID
    assert "--L" in missing_flags.output
    assert missing_preset.exit_code == EXIT_INVALID
    assert not (tmp_path / "runs.csv").exists()


def test_run_reports_failed_runs(tmp_path: Path) -> None:
    config_path = tmp_path / "experiments.yaml"
    config_path.write_text(
        "experiments:\n  presets:\n    - name: tiny-budget\n      env: chain\n      algo: disco\n"
        "      L: 2\n      eps: 0.5\n      tunings:\n        max_steps: 1\n",
        encoding="utf-8",
    )

    result = runner.invoke(
        app, ["run", "--preset", "tiny-budget", "--config", str(config_path), "--out-dir", str(tmp_path)]
    )

    assert result.exit_code == EXIT_RUN_FAILURE
    assert pd.read_csv(tmp_path / "runs.csv")["stop_reason"].tolist() == ["ERROR"]


def test_oracle_prints_sets_and_values() -> None:
    result = runner.invoke(app, ["oracle", "--env", "combination-lock", "--L", "2.7"])

    assert result.exit_code == 0, result.output
    assert "S_L  (6): [0, 1, 2, 3, 4, 5]" in result.output
    assert "S_L→ (4): [2, 3, 4, 5]" in result.output
    assert "     3* 0.000000" in result.output
    assert "     2* 2.666667" in result.output


def test_oracle_rejects_short_exploration_length() -> None:
    result = runner.invoke(app, ["oracle", "--env", "chain", "--L", "0.5"])

    assert result.exit_code == EXIT_INVALID


def test_verify_recomputes_flags(tmp_path: Path) -> None:
    runner.invoke(app, CHAIN_RUN + ["--seeds", "2", "--out-dir", str(tmp_path), "--quiet"])
    verify = ["verify", "--runs", str(tmp_path / "runs.csv"), "--env", "chain", "--env-param", "n=2"]
    verify += ["--L", "2", "--eps", "0.5"]

    result = runner.invoke(app, verify)

    assert result.exit_code == 0, result.output
    assert "seed 0: AX_L=1 AX′=1 AX*=1" in result.output

    runs = pd.read_csv(tmp_path / "runs.csv")
    runs.loc[0, "ax_star"] = 0
    runs.to_csv(tmp_path / "runs.csv", index=False)

    tampered = runner.invoke(app, verify)

    assert tampered.exit_code == EXIT_RUN_FAILURE
    assert "difere do CSV" in tampered.output


def test_verify_missing_runs_file(tmp_path: Path) -> None:
    result = runner.invoke(
        app, ["verify", "--runs", str(tmp_path / "x.csv"), "--env", "chain", "--L", "2", "--eps", "0.5"]
    )

    assert result.exit_code == EXIT_INVALID


def test_plan_from_saved_counts(tmp_path: Path) -> None:
    counts_path = _chain_counts(tmp_path / "counts.txt")

    result = runner.invoke(
        app,
        [
            "plan",
            "--env",
            "chain",
            "--env-param",
            "n=3",
            "--counts",
            str(counts_path),
            "--goal",
            "2",
            "--cost",
            "half",
            "--L",
            "2",
            "--eps",
            "0.5",
        ],
    )

    assert result.exit_code == 0, result.output
    assert "K (3): [0, 1, 2]" in result.output
    assert "Custo esperado de s0 até 2: 1.000000" in result.output


def test_plan_rejects_incompatible_snapshot(tmp_path: Path) -> None:
    counts_path = _chain_counts(tmp_path / "counts.txt")

    result = runner.invoke(
        app,
        ["plan", "--env", "combination-lock", "--counts", str(counts_path), "--goal", "2", "--L", "2", "--eps", "0.5"],
    )

    assert result.exit_code == EXIT_INVALID
    assert "incompatível" in result.output


def test_export_env_roundtrip(tmp_path: Path) -> None:
    target = tmp_path / "lock.mdp"

    result = runner.invoke(app, ["export-env", "--env", "combination-lock", "--out", str(target)])
    loaded = parse_mdp(target)

    assert result.exit_code == 0, result.output
    assert np.array_equal(loaded.transition, make_combination_lock(6).transition)
