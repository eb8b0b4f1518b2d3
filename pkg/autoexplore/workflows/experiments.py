"""Execução semeada de experimentos DisCo/UcbExplore e presets YAML."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional

import yaml

from autoexplore.agents import (
    ExplorationResult,
    MdpEnvironment,
    UcbConfig,
    disco_run,
    ucb_run,
)
from autoexplore.agents.common import MAX_STEPS
from autoexplore.analysis import evaluate_policy_hitting, resetting_policy_hitting
from autoexplore.envs import ENVIRONMENTS, UnknownEnvironmentError, make_environment
from autoexplore.mdp.core import AlgoParams, DeterministicPolicy, Mode, TabularMdp, make_rng
from autoexplore.mdp.io import MdpFormatError
from autoexplore.reporting.tables import RunRecord
from autoexplore.workflows.verification import ControllabilityOracle, build_oracle, verify_ax

DEFAULT_CONFIG = Path("config/experiments.yaml")
SUPPORTED_ALGORITHMS = {"disco", "ucb"}
DISCO_TUNINGS = {"theta", "max_steps"}
UCB_TUNINGS = {
    "horizon",
    "episodes_per_round",
    "bonus_variant",
    "bucketed_counts",
    "episode_log_factor",
    "max_steps",
}


class InvalidExperimentError(ValueError):
    """Erro disparado quando a especificação do experimento é inválida."""


@dataclass
class ExperimentSpec:
    """Descrição completa de um experimento (ambiente, algoritmo, parâmetros e sementes)."""

    env: str
    algo: str
    params: AlgoParams
    env_params: Dict[str, object] = field(default_factory=dict)
    tunings: Dict[str, object] = field(default_factory=dict)
    seeds: int = 1
    base_seed: int = 0
    name: str = ""

    def validate(self) -> "ExperimentSpec":
        if self.algo not in SUPPORTED_ALGORITHMS:
            raise InvalidExperimentError(
                f"Algoritmo '{self.algo}' não suportado. Use um de: {', '.join(sorted(SUPPORTED_ALGORITHMS))}."
            )
        if not self.env.startswith("file:") and self.env not in ENVIRONMENTS:
            raise InvalidExperimentError(
                f"Ambiente '{self.env}' desconhecido. Disponíveis: {', '.join(sorted(ENVIRONMENTS))} ou file:<caminho>."
            )
        if self.seeds < 1:
            raise InvalidExperimentError("seeds deve ser >= 1.")
        allowed = DISCO_TUNINGS if self.algo == "disco" else UCB_TUNINGS
        unknown = set(self.tunings) - allowed
        if unknown:
            raise InvalidExperimentError(
                f"Ajustes desconhecidos para '{self.algo}': {', '.join(sorted(unknown))}."
            )
        return self

    def seed_list(self) -> List[int]:
        return [self.base_seed + i for i in range(self.seeds)]


def parse_param_value(raw: str) -> object:
    """Converte ``raw`` em int, depois float; caso contrário mantém o texto."""
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


def parse_env_params(pairs: Optional[Iterable[str]]) -> Dict[str, object]:
    params: Dict[str, object] = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise InvalidExperimentError(f"Parâmetro de ambiente inválido: '{pair}' (use chave=valor).")
        params[key.strip()] = parse_param_value(value.strip())
    return params


def build_params(L: float, eps: float, delta: float, mode: str, theta: str = "pair") -> AlgoParams:
    try:
        return AlgoParams(L=L, epsilon=eps, delta=delta, mode=Mode(mode), theta=theta)
    except ValueError as exc:
        raise InvalidExperimentError(str(exc)) from exc


def spec_from_mapping(entry: Mapping[str, object], defaults: Mapping[str, object] | None = None) -> ExperimentSpec:
    """Monta o ``ExperimentSpec`` com os valores do preset sobrepondo ``defaults``."""
    merged: Dict[str, object] = dict(defaults or {})
    merged.update(entry)
    for key in ("env", "algo"):
        if not merged.get(key):
            raise InvalidExperimentError(f"Campo obrigatório ausente: '{key}'.")
    tunings = dict(merged.get("tunings") or {})
    try:
        params = build_params(
            float(merged.get("L", 1.0)),
            float(merged.get("eps", 1.0)),
            float(merged.get("delta", 0.1)),
            str(merged.get("mode", Mode.PRACTICAL.value)),
            str(tunings.get("theta", "pair")),
        )
        spec = ExperimentSpec(
            env=str(merged["env"]),
            algo=str(merged["algo"]),
            params=params,
            env_params=dict(merged.get("env_params") or {}),
            tunings=tunings,
            seeds=int(merged.get("seeds", 1)),
            base_seed=int(merged.get("base_seed", 0)),
            name=str(merged.get("name", "")),
        )
    except InvalidExperimentError:
        raise
    except (TypeError, ValueError) as exc:
        raise InvalidExperimentError(f"Preset inválido: {exc}") from exc
    return spec.validate()


def load_experiment_config(path: str | Path = DEFAULT_CONFIG) -> Dict[str, ExperimentSpec]:
    """Lê o YAML de experimentos e retorna os presets por nome."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Arquivo de experimentos não encontrado: {path}")

    with path.open("r", encoding="utf-8") as handle:
        data = yaml.safe_load(handle) or {}

    section = data.get("experiments") or {}
    defaults = section.get("defaults", {})
    specs: Dict[str, ExperimentSpec] = {}
    for entry in section.get("presets", []):
        name = entry.get("name")
        if not name:
            raise InvalidExperimentError("Todo preset precisa de 'name'.")
        specs[name] = spec_from_mapping(entry, defaults)
    return specs


def load_environment(env: str, env_params: Optional[Mapping[str, object]] = None) -> TabularMdp:
    """Instancia o ambiente; nome, arquivo ou parâmetros inválidos viram ``InvalidExperimentError``."""
    try:
        return make_environment(env, dict(env_params or {}))
    except (UnknownEnvironmentError, MdpFormatError, FileNotFoundError) as exc:
        raise InvalidExperimentError(str(exc)) from exc
    except ValueError as exc:
        raise InvalidExperimentError(f"Parâmetros inválidos para '{env}': {exc}") from exc


def explore(spec: ExperimentSpec, mdp: TabularMdp, seed: int) -> ExplorationResult:
    tunings = dict(spec.tunings)
    env = MdpEnvironment(mdp, make_rng(seed), max_steps=int(tunings.pop("max_steps", MAX_STEPS)))
    if spec.algo == "disco":
        return disco_run(env, spec.params)
    return ucb_run(env, UcbConfig(spec.params, **tunings))


def policy_hitting_times(mdp: TabularMdp, result: ExplorationResult) -> Dict[int, float]:
    """Tempo esperado exato de s0 até cada estado de K com a política devolvida."""
    s0 = mdp.initial_state
    times: Dict[int, float] = {}
    for s in result.known:
        policy = result.policies[s]
        if isinstance(policy, DeterministicPolicy):
            times[s] = evaluate_policy_hitting(mdp, policy, s).at(s0)
        else:
            times[s] = resetting_policy_hitting(mdp, policy, s, result.horizon or policy.horizon)
    return times


def run_single(spec: ExperimentSpec, mdp: TabularMdp, seed: int, oracle: ControllabilityOracle) -> RunRecord:
    """Uma execução completa; falhas viram um registro com ``error``."""
    try:
        result = explore(spec, mdp, seed)
        record = RunRecord(
            seed=seed,
            algorithm=spec.algo,
            sample_complexity=result.total_steps,
            stop_reason=result.stop_reason.value,
            known=result.known,
            hitting_times=policy_hitting_times(mdp, result),
            rounds=result.rounds,
            counts=result.counts,
        )
        tracked = len(oracle.incremental)
        record.curve = [
            (step, count / tracked) for step, count in result.sampled_curve(oracle.incremental)
        ]
        record.flags = verify_ax(record, mdp, spec.params, oracle)
        return record
    except Exception as exc:  # noqa: BLE001 - a execução falha, o experimento segue
        return RunRecord(seed=seed, algorithm=spec.algo, error=f"{type(exc).__name__}: {exc}")


def _progress_line(record: RunRecord) -> str:
    if not record.ok:
        return f"  -> seed {record.seed}: falhou ({record.error})"
    return f"  -> seed {record.seed}: {record.sample_complexity:,} passos ({record.stop_reason})"


def run_experiment(
    spec: ExperimentSpec,
    *,
    workers: int = 1,
    show_progress: bool = False,
    oracle: Optional[ControllabilityOracle] = None,
) -> List[RunRecord]:
    """Executa ``spec.seeds`` execuções independentes (sementes ``base_seed + i``).

    Com ``workers > 1`` as execuções rodam em processos separados; o resultado
    é o mesmo da execução sequencial e volta ordenado por semente.
    """
    spec.validate()
    mdp = load_environment(spec.env, spec.env_params)
    if oracle is None:
        oracle = build_oracle(mdp, spec.params)
    seeds = spec.seed_list()
    if show_progress:
        label = spec.name or f"{spec.algo} em {spec.env}"
        print(f"Executando {label}: {len(seeds)} sementes (L={spec.params.L:g}, eps={spec.params.epsilon:g})")

    records: List[RunRecord] = []
    if workers <= 1:
        for seed in seeds:
            record = run_single(spec, mdp, seed, oracle)
            records.append(record)
            if show_progress:
                print(_progress_line(record))
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(run_single, spec, mdp, seed, oracle) for seed in seeds]
            for future in as_completed(futures):
                record = future.result()
                records.append(record)
                if show_progress:
                    print(_progress_line(record))
    return sorted(records, key=lambda r: r.seed)


def override_spec(spec: ExperimentSpec, **changes: object) -> ExperimentSpec:
    """Cópia validada do ``spec`` com os campos informados (``None`` é ignorado)."""
    updates = {key: value for key, value in changes.items() if value is not None}
    return replace(spec, **updates).validate()
