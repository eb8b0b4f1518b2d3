"""Contadores de visitas N(s,a) e N(s,a,s') e o formato texto dos snapshots."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from autoexplore.mdp.io import (
    MdpFormatError,
    Source,
    open_text,
    check_index,
    iter_records,
    parse_int,
)


@dataclass
class CountsTable:
    """Visit counters; ``p_hat`` is ``n_sas / n_sa`` (zero rows where unvisited)."""

    n_sas: np.ndarray
    n_sa: np.ndarray
    total_steps: int = 0

    @classmethod
    def empty(cls, num_states: int, num_actions: int) -> "CountsTable":
        return cls(
            n_sas=np.zeros((num_states, num_actions, num_states), dtype=np.int64),
            n_sa=np.zeros((num_states, num_actions), dtype=np.int64),
        )

    @property
    def num_states(self) -> int:
        return self.n_sas.shape[0]

    @property
    def num_actions(self) -> int:
        return self.n_sas.shape[1]

    def p_hat(self, s: int, a: int) -> np.ndarray:
        visits = self.n_sa[s, a]
        if visits == 0:
            return np.zeros(self.num_states)
        return self.n_sas[s, a] / visits

    def empirical_kernel(self) -> np.ndarray:
        return self.n_sas / np.maximum(self.n_sa, 1)[:, :, None]

    def is_consistent(self) -> bool:
        return bool(
            np.array_equal(self.n_sas.sum(axis=2), self.n_sa)
            and self.total_steps >= (int(self.n_sa.max()) if self.n_sa.size else 0)
        )


def record_transition(counts: CountsTable, s: int, a: int, s_next: int) -> CountsTable:
    counts.n_sas[s, a, s_next] += 1
    counts.n_sa[s, a] += 1
    counts.total_steps += 1
    return counts


def write_counts(counts: CountsTable, target: Source, *, title: Optional[str] = None) -> None:
    """Salva o snapshot: ``counts <S> <A>`` e uma linha ``c <s> <a> <s'> <n>`` por contagem."""
    if isinstance(target, (str, Path)):
        Path(target).parent.mkdir(parents=True, exist_ok=True)
    with open_text(target, "w") as handle:
        if title:
            handle.write(f"# {title}\n")
        handle.write(f"counts {counts.num_states} {counts.num_actions}\n")
        for s, a, s_next in np.argwhere(counts.n_sas > 0):
            handle.write(f"c {s} {a} {s_next} {counts.n_sas[s, a, s_next]}\n")


def parse_counts(source: Source) -> CountsTable:
    """Lê um snapshot de contagens; ``total_steps`` passa a ser a soma das visitas."""
    with open_text(source, "r") as handle:
        records = iter_records(handle)
        header = next(records, None)
        if header is None:
            raise MdpFormatError("arquivo vazio (cabeçalho 'counts' ausente)")
        header_line, tokens = header
        if tokens[0] != "counts" or len(tokens) != 3:
            raise MdpFormatError("cabeçalho esperado: 'counts <S> <A>'", header_line)
        num_states = parse_int(tokens[1], header_line, "S")
        num_actions = parse_int(tokens[2], header_line, "A")
        if num_states < 1 or num_actions < 1:
            raise MdpFormatError("S e A devem ser positivos", header_line)
        counts = CountsTable.empty(num_states, num_actions)
        for number, tokens in records:
            if tokens[0] != "c" or len(tokens) != 5:
                raise MdpFormatError("linha de contagem esperada: 'c <s> <a> <s_next> <n>'", number)
            s = check_index(parse_int(tokens[1], number, "s"), num_states, number, "s")
            a = check_index(parse_int(tokens[2], number, "a"), num_actions, number, "a")
            s_next = check_index(parse_int(tokens[3], number, "s_next"), num_states, number, "s_next")
            visits = parse_int(tokens[4], number, "n")
            if visits < 0:
                raise MdpFormatError(f"contagem negativa: {visits}", number)
            counts.n_sas[s, a, s_next] += visits
    counts.n_sa = counts.n_sas.sum(axis=2)
    counts.total_steps = int(counts.n_sa.sum())
    return counts
