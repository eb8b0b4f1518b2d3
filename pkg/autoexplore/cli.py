"""Interface de linha de comando do autoexplore."""

from __future__ import annotations

from pathlib import Path
from typing import List, NoReturn, Optional

import typer

from autoexplore.analysis import (
    controllable_set,
    incrementally_controllable_set,
    restricted_values,
)
from autoexplore.planning.counts import write_counts
from autoexplore.reporting import (
    RunRecord,
    aggregate,
    format_summary,
    write_curve_csv,
    write_runs_csv,
    write_summary_csv,
)
from autoexplore.workflows import (
    DEFAULT_CONFIG,
    ExperimentSpec,
    InvalidExperimentError,
    build_params,
    load_environment,
    load_experiment_config,
    override_spec,
    parse_env_params,
    run_experiment,
)

DEFAULT_OUT_DIR = Path("results")
EXIT_INVALID = 2
EXIT_RUN_FAILURE = 3

app = typer.Typer(help="Gerenciador de experimentos autoexplore.")


@app.callback()
def main() -> None:
    """Menu principal."""
    typer.echo("autoexplore CLI")


def fail_invalid(message: str) -> NoReturn:
    """Mensagem de erro e saída com o código de especificação inválida."""
    typer.echo(f"Erro: {message}", err=True)
    raise typer.Exit(code=EXIT_INVALID)


def _preset_spec(preset: str, config: Path) -> ExperimentSpec:
    specs = load_experiment_config(config)
    if preset not in specs:
        raise InvalidExperimentError(
            f"Preset '{preset}' não encontrado em {config}. Disponíveis: {', '.join(sorted(specs)) or '-'}"
        )
    return specs[preset]


def resolve_spec(
    *,
    preset: Optional[str],
    config: Path,
    env: Optional[str],
    env_param: Optional[List[str]],
    algo: Optional[str],
    L: Optional[float],
    eps: Optional[float],
    delta: Optional[float],
    mode: Optional[str],
    seeds: Optional[int],
    base_seed: Optional[int],
) -> ExperimentSpec:
    """Combina preset (quando houver) e flags explícitas; as flags prevalecem."""
    env_params = parse_env_params(env_param) if env_param else None
    if preset:
        spec = _preset_spec(preset, config)
        params = spec.params
        if any(value is not None for value in (L, eps, delta, mode)):
            params = build_params(
                L if L is not None else params.L,
                eps if eps is not None else params.epsilon,
                delta if delta is not None else params.delta,
                mode or params.mode.value,
                params.theta,
            )
        return override_spec(
            spec,
            env=env,
            env_params=env_params,
            algo=algo,
            params=params,
            seeds=seeds,
            base_seed=base_seed,
        )

    missing = [flag for flag, value in (("--env", env), ("--algo", algo), ("--L", L), ("--eps", eps)) if value is None]
    if missing:
        raise InvalidExperimentError(f"Informe {', '.join(missing)} ou use --preset.")
    spec = ExperimentSpec(
        env=str(env),
        algo=str(algo),
        params=build_params(float(L), float(eps), 0.1 if delta is None else delta, mode or "practical"),
        env_params=env_params or {},
        seeds=1 if seeds is None else seeds,
        base_seed=0 if base_seed is None else base_seed,
    )
    return spec.validate()


def _ax_counts(records: List[RunRecord]) -> str:
    flagged = [record.flags for record in records if record.flags is not None]
    return (
        f"AX_L {sum(f.ax_l for f in flagged)}/{len(flagged)} | "
        f"AX′ {sum(f.ax_prime for f in flagged)}/{len(flagged)} | "
        f"AX* {sum(f.ax_star for f in flagged)}/{len(flagged)}"
    )


@app.command()
def run(
    env: Optional[str] = typer.Option(
        None, "--env", help="Ambiente: confusing-chain, combination-lock, layered-star, chain ou file:<caminho>"
    ),
    env_param: Optional[List[str]] = typer.Option(
        None, "--env-param", help="Parâmetro do ambiente no formato chave=valor (pode repetir)"
    ),
    algo: Optional[str] = typer.Option(None, "--algo", help="Algoritmo: disco ou ucb"),
    L: Optional[float] = typer.Option(None, "--L", help="Comprimento de exploração L (>= 1)"),
    eps: Optional[float] = typer.Option(None, "--eps", help="Precisão epsilon (valores > 1 viram 1)"),
    delta: Optional[float] = typer.Option(None, "--delta", help="Confiança delta em (0, 1). Padrão: 0.1"),
    mode: Optional[str] = typer.Option(None, "--mode", help="theoretical ou practical. Padrão: practical"),
    seeds: Optional[int] = typer.Option(None, "--seeds", help="Número de execuções independentes"),
    base_seed: Optional[int] = typer.Option(None, "--base-seed", help="Semente da primeira execução"),
    workers: int = typer.Option(1, "--workers", help="Processos em paralelo"),
    out_dir: Path = typer.Option(DEFAULT_OUT_DIR, "--out-dir", help="Diretório dos CSVs de saída"),
    preset: Optional[str] = typer.Option(None, "--preset", help="Preset nomeado do YAML de experimentos"),
    config: Path = typer.Option(DEFAULT_CONFIG, "--config", help="YAML de experimentos"),
    save_counts: bool = typer.Option(False, "--save-counts", help="Salva o snapshot de contagens de cada execução"),
    quiet: bool = typer.Option(False, "--quiet", help="Não imprime o progresso por semente"),
) -> None:
    """Executa um experimento semeado e grava runs.csv, summary.csv e curve.csv."""
    try:
        spec = resolve_spec(
            preset=preset,
            config=config,
            env=env,
            env_param=env_param,
            algo=algo,
            L=L,
            eps=eps,
            delta=delta,
            mode=mode,
            seeds=seeds,
            base_seed=base_seed,
        )
        records = run_experiment(spec, workers=workers, show_progress=not quiet)
    except (InvalidExperimentError, FileNotFoundError) as exc:
        fail_invalid(str(exc))

    runs_path = write_runs_csv(records, out_dir / "runs.csv")
    summary_path = write_summary_csv(records, out_dir / "summary.csv")
    curve_path = write_curve_csv(records, out_dir / "curve.csv")
    if save_counts:
        for record in records:
            if record.counts is not None:
                write_counts(
                    record.counts,
                    out_dir / f"counts_seed{record.seed}.txt",
                    title=f"{spec.algo} em {spec.env}, seed {record.seed}",
                )

    typer.echo(format_summary(aggregate(records)))
    typer.echo(_ax_counts(records))
    typer.echo(f"Arquivos gravados: {runs_path}, {summary_path}, {curve_path}")

    failures = [record for record in records if not record.ok]
    if failures:
        for record in failures:
            typer.echo(f"Execução seed {record.seed} falhou: {record.error}", err=True)
        raise typer.Exit(code=EXIT_RUN_FAILURE)


@app.command()
def oracle(
    env: str = typer.Option(..., "--env", help="Ambiente registrado ou file:<caminho>"),
    env_param: Optional[List[str]] = typer.Option(None, "--env-param", help="Parâmetro chave=valor (pode repetir)"),
    L: float = typer.Option(..., "--L", help="Comprimento de exploração L"),
) -> None:
    """Imprime S_L, S_L→ e V*_{S_L→}(s0 → s) para cada estado."""
    try:
        if not L >= 1.0:
            raise InvalidExperimentError(f"L deve ser >= 1 (recebido {L}).")
        mdp = load_environment(env, parse_env_params(env_param))
    except InvalidExperimentError as exc:
        fail_invalid(str(exc))

    reachable = controllable_set(mdp, L)
    incremental = incrementally_controllable_set(mdp, L)
    values = restricted_values(mdp, incremental, range(mdp.num_states))
    typer.echo(f"S_L  ({len(reachable)}): {sorted(reachable)}")
    typer.echo(f"S_L→ ({len(incremental)}): {sorted(incremental)}")
    typer.echo("estado  V*_{S_L→}")
    for s in range(mdp.num_states):
        marker = "*" if s in incremental else " "
        typer.echo(f"{s:>6}{marker} {values[s]:.6f}")


__all__ = ["app", "fail_invalid", "resolve_spec", "EXIT_INVALID", "EXIT_RUN_FAILURE"]
