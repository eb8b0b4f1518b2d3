"""Registros de execução, agregação com intervalos de confiança e arquivos CSV."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from autoexplore.planning.counts import CountsTable

Z_95 = 1.96
RUN_COLUMNS = ["seed", "sample_complexity", "stop_reason", "ax_l", "ax_prime", "ax_star"]
CURVE_COLUMNS = ["seed", "step", "fraction_controllable"]
SUMMARY_COLUMNS = ["metric", "mean", "ci95"]
ERROR_REASON = "ERROR"
_GOAL_COLUMN = re.compile(r"^v_goal_(\d+)$")


@dataclass
class AxFlags:
    ax_l: bool
    ax_prime: bool
    ax_star: bool


@dataclass
class RunRecord:
    """Resultado de uma execução semeada.

    ``hitting_times`` traz o tempo esperado exato de s0 até cada estado de K
    usando a política devolvida; ``curve`` guarda ``(passo, fração de S_L→)``.
    """

    seed: int
    algorithm: str
    sample_complexity: int = 0
    stop_reason: str = ERROR_REASON
    known: Tuple[int, ...] = ()
    hitting_times: Dict[int, float] = field(default_factory=dict)
    flags: Optional[AxFlags] = None
    curve: List[Tuple[int, float]] = field(default_factory=list)
    rounds: int = 0
    error: Optional[str] = None
    counts: Optional[CountsTable] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _flag(record: RunRecord, name: str) -> float:
    if record.flags is None:
        return math.nan
    return float(getattr(record.flags, name))


def _goal_states(records: Iterable[RunRecord]) -> List[int]:
    states = set()
    for record in records:
        states.update(record.hitting_times)
    return sorted(states)


def runs_frame(records: Sequence[RunRecord]) -> pd.DataFrame:
    """Uma linha por execução, ordenada por semente."""
    ordered = sorted(records, key=lambda r: r.seed)
    goals = _goal_states(ordered)
    rows = []
    for record in ordered:
        row: Dict[str, object] = {
            "seed": record.seed,
            "sample_complexity": record.sample_complexity,
            "stop_reason": record.stop_reason,
            "ax_l": _flag(record, "ax_l"),
            "ax_prime": _flag(record, "ax_prime"),
            "ax_star": _flag(record, "ax_star"),
        }
        for goal in goals:
            row[f"v_goal_{goal}"] = record.hitting_times.get(goal, math.nan)
        rows.append(row)
    frame = pd.DataFrame(rows, columns=RUN_COLUMNS + [f"v_goal_{g}" for g in goals])
    for column in ("ax_l", "ax_prime", "ax_star"):
        frame[column] = frame[column].astype("Int64")
    return frame


def curve_frame(records: Sequence[RunRecord]) -> pd.DataFrame:
    rows = [
        {"seed": record.seed, "step": step, "fraction_controllable": fraction}
        for record in sorted(records, key=lambda r: r.seed)
        for step, fraction in record.curve
    ]
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def _mean_ci(values: pd.Series) -> Tuple[float, float]:
    data = values.dropna().astype(float)
    if data.empty:
        return math.nan, math.nan
    if np.isinf(data).any():
        return math.inf, math.inf
    mean = float(data.mean())
    if data.shape[0] < 2:
        return mean, 0.0
    return mean, float(Z_95 * data.std(ddof=1) / math.sqrt(data.shape[0]))


def aggregate(records: Sequence[RunRecord]) -> pd.DataFrame:
    """Média e meia largura do IC 95% (aproximação normal) por métrica.

    Execuções com erro ficam de fora; as flags AX viram proporções.
    """
    if not records:
        raise ValueError("Nenhum registro para agregar.")
    valid = [record for record in records if record.ok]
    frame = runs_frame(valid) if valid else runs_frame([])
    metrics = ["sample_complexity", "ax_l", "ax_prime", "ax_star"]
    metrics += [column for column in frame.columns if _GOAL_COLUMN.match(column)]
    rows = []
    for metric in metrics:
        mean, ci = _mean_ci(frame[metric]) if metric in frame else (math.nan, math.nan)
        rows.append({"metric": metric, "mean": mean, "ci95": ci})
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def write_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"Falha ao gravar {path}: {exc}") from exc
    return path


def write_runs_csv(records: Sequence[RunRecord], path: str | Path) -> Path:
    return write_csv(runs_frame(records), path)


def write_curve_csv(records: Sequence[RunRecord], path: str | Path) -> Path:
    return write_csv(curve_frame(records), path)


def write_summary_csv(records: Sequence[RunRecord], path: str | Path) -> Path:
    return write_csv(aggregate(records), path)


def read_runs_csv(path: str | Path, algorithm: str = "") -> List[RunRecord]:
    """Reconstrói registros a partir do CSV de execuções (K = colunas v_goal preenchidas)."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Arquivo de execuções não encontrado: {path}")
    frame = pd.read_csv(path)
    missing = set(RUN_COLUMNS) - set(frame.columns)
    if missing:
        raise ValueError(f"Colunas obrigatórias ausentes em {path}: {sorted(missing)}")
    goals = {int(m.group(1)): column for column in frame.columns if (m := _GOAL_COLUMN.match(column))}
    records: List[RunRecord] = []
    for _, row in frame.iterrows():
        hitting = {goal: float(row[column]) for goal, column in goals.items() if pd.notna(row[column])}
        flags = None
        if all(pd.notna(row[name]) for name in ("ax_l", "ax_prime", "ax_star")):
            flags = AxFlags(bool(row["ax_l"]), bool(row["ax_prime"]), bool(row["ax_star"]))
        stop_reason = str(row["stop_reason"])
        records.append(
            RunRecord(
                seed=int(row["seed"]),
                algorithm=algorithm,
                sample_complexity=int(row["sample_complexity"]),
                stop_reason=stop_reason,
                known=tuple(sorted(hitting)),
                hitting_times=hitting,
                flags=flags,
                error="registro sem resultado" if stop_reason == ERROR_REASON else None,
            )
        )
    return records


def format_summary(summary: pd.DataFrame) -> str:
    """Tabela textual ``métrica  média (IC)`` no estilo das tabelas de resultados."""
    lines = []
    for _, row in summary.iterrows():
        mean, ci = row["mean"], row["ci95"]
        if pd.isna(mean):
            text = "-"
        elif row["metric"] == "sample_complexity":
            text = f"{mean:,.0f} ({ci:,.0f})"
        else:
            text = f"{mean:.3f} ({ci:.3f})"
        lines.append(f"{row['metric']:<20} {text}")
    return "\n".join(lines)
