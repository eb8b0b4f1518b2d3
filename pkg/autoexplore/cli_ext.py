"""Extensões de CLI separadas para manter o arquivo principal estável.

Adiciona comandos:
  - verify: recalcula as flags AX de um runs.csv contra os oráculos exatos
  - plan: política sensível a custo a partir de um snapshot de contagens
  - export-env: grava um ambiente no formato texto de MDP
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Optional

import numpy as np
import typer

from autoexplore.agents import infer_known_states, plan_from_counts
from autoexplore.analysis import (
    evaluate_policy_cost,
    incrementally_controllable_set,
    optimal_shortest_path,
)
from autoexplore.cli import EXIT_RUN_FAILURE, fail_invalid
from autoexplore.mdp.core import TabularMdp, make_rng
from autoexplore.mdp.io import MdpFormatError, write_mdp
from autoexplore.planning.counts import parse_counts
from autoexplore.reporting import read_runs_csv
from autoexplore.workflows import (
    InvalidExperimentError,
    build_oracle,
    build_params,
    load_environment,
    parse_env_params,
    verify_ax,
)

COST_PRESETS = ("unit", "half", "random")
RANDOM_COST_RANGE = (0.5, 1.0)


def cost_preset(name: str, mdp: TabularMdp, seed: int = 0) -> np.ndarray:
    """Tabela ``(S, A)`` de custos em ``(0, 1]`` para o preset ``name``."""
    shape = (mdp.num_states, mdp.num_actions)
    if name == "unit":
        return np.ones(shape)
    if name == "half":
        return np.full(shape, 0.5)
    if name == "random":
        low, high = RANDOM_COST_RANGE
        return make_rng(seed).uniform(low, high, size=shape)
    raise InvalidExperimentError(f"Custo '{name}' desconhecido. Use um de: {', '.join(COST_PRESETS)}.")


def register(app: typer.Typer) -> None:
    @app.command()
    def verify(
        runs: Path = typer.Option(..., "--runs", help="CSV de execuções gerado por 'run'"),
        env: str = typer.Option(..., "--env", help="Ambiente usado nas execuções"),
        env_param: Optional[List[str]] = typer.Option(None, "--env-param", help="Parâmetro chave=valor"),
        L: float = typer.Option(..., "--L", help="Comprimento de exploração L"),
        eps: float = typer.Option(..., "--eps", help="Precisão epsilon"),
        delta: float = typer.Option(0.1, "--delta", help="Confiança delta"),
    ) -> None:
        """Recalcula AX_L, AX′ e AX* de cada execução e compara com o CSV."""
        try:
            params = build_params(L, eps, delta, "practical")
            mdp = load_environment(env, parse_env_params(env_param))
            records = read_runs_csv(runs)
        except (InvalidExperimentError, FileNotFoundError, ValueError) as exc:
            fail_invalid(str(exc))

        oracle = build_oracle(mdp, params)
        mismatches = 0
        for record in records:
            if not record.ok:
                typer.echo(f"seed {record.seed}: sem resultado ({record.stop_reason})")
                continue
            try:
                flags = verify_ax(record, mdp, params, oracle)
            except ValueError as exc:
                fail_invalid(f"seed {record.seed}: {exc}")
            stored = record.flags
            marker = ""
            if stored is not None and stored != flags:
                mismatches += 1
                marker = "  (difere do CSV)"
            typer.echo(
                f"seed {record.seed}: AX_L={int(flags.ax_l)} AX′={int(flags.ax_prime)} "
                f"AX*={int(flags.ax_star)}{marker}"
            )
        typer.echo(f"S_L→ com {len(oracle.incremental)} estados; {len(records)} execuções verificadas.")
        if mismatches:
            typer.echo(f"{mismatches} execução(ões) com flags divergentes.", err=True)
            raise typer.Exit(code=EXIT_RUN_FAILURE)

    @app.command()
    def plan(
        env: str = typer.Option(..., "--env", help="Ambiente registrado ou file:<caminho>"),
        env_param: Optional[List[str]] = typer.Option(None, "--env-param", help="Parâmetro chave=valor"),
        counts_path: Path = typer.Option(..., "--counts", help="Snapshot de contagens salvo com --save-counts"),
        goal: int = typer.Option(..., "--goal", help="Estado objetivo (deve estar em K)"),
        cost: str = typer.Option("unit", "--cost", help="Custo: unit, half ou random"),
        known: Optional[List[int]] = typer.Option(
            None, "--known", help="Estados de K (padrão: inferido do snapshot)"
        ),
        L: float = typer.Option(..., "--L", help="Comprimento de exploração L"),
        eps: float = typer.Option(..., "--eps", help="Precisão epsilon"),
        delta: float = typer.Option(0.1, "--delta", help="Confiança delta"),
        mode: str = typer.Option("practical", "--mode", help="theoretical ou practical"),
        seed: int = typer.Option(0, "--seed", help="Semente do custo aleatório"),
    ) -> None:
        """Planeja sem novas amostras rumo a ``--goal`` com o custo escolhido."""
        try:
            params = build_params(L, eps, delta, mode)
            mdp = load_environment(env, parse_env_params(env_param))
            counts = parse_counts(counts_path)
            if (counts.num_states, counts.num_actions) != (mdp.num_states, mdp.num_actions):
                raise InvalidExperimentError(
                    f"Snapshot {counts.num_states}x{counts.num_actions} incompatível com o MDP "
                    f"{mdp.num_states}x{mdp.num_actions}."
                )
            table = cost_preset(cost, mdp, seed)
            states = list(known) if known else infer_known_states(counts, mdp.initial_state)
            if states[0] != mdp.initial_state:
                states = [mdp.initial_state] + [s for s in states if s != mdp.initial_state]
            gamma = params.epsilon * float(table.min()) / (6.0 * params.L)
            policy = plan_from_counts(
                counts,
                states,
                goal,
                table,
                gamma,
                params,
                initial_state=mdp.initial_state,
                reset_action=mdp.reset_action,
            )
        except (InvalidExperimentError, MdpFormatError, FileNotFoundError, ValueError) as exc:
            fail_invalid(str(exc))

        s0 = mdp.initial_state
        achieved = evaluate_policy_cost(mdp, policy, goal, table).at(s0)
        incremental = incrementally_controllable_set(mdp, params.L)
        optimum = optimal_shortest_path(mdp, incremental, goal, cost=table)[0].at(s0)
        typer.echo(f"K ({len(states)}): {sorted(states)}")
        typer.echo("estado  ação")
        for s in sorted(states):
            typer.echo(f"{s:>6}  {policy(s)}")
        typer.echo(f"Custo esperado de s0 até {goal}: {achieved:.6f}")
        typer.echo(f"Ótimo restrito a S_L→:          {optimum:.6f}")

    @app.command("export-env")
    def export_env(
        env: str = typer.Option(..., "--env", help="Ambiente registrado"),
        env_param: Optional[List[str]] = typer.Option(None, "--env-param", help="Parâmetro chave=valor"),
        output: Path = typer.Option(..., "--out", help="Arquivo de saída no formato texto de MDP"),
    ) -> None:
        """Exporta um ambiente para ser lido depois com ``--env file:<caminho>``."""
        try:
            mdp = load_environment(env, parse_env_params(env_param))
        except InvalidExperimentError as exc:
            fail_invalid(str(exc))
        write_mdp(mdp, output, title=env)
        typer.echo(f"Ambiente salvo em {output} ({mdp.num_states} estados, {mdp.num_actions} ações).")
