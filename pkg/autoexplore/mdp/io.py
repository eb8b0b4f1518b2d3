"""Leitura e escrita do formato texto de MDPs.

Formato::

    # comentário
    mdp <S> <A> <s0> <reset_action>
    t <s> <a> <s'> <prob>

Uma linha ``t`` por entrada não nula; probabilidades com 17 dígitos
significativos para que a ida e volta seja exata.
"""

from __future__ import annotations

import io
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Iterator, List, Optional, Tuple, Union

import numpy as np

from autoexplore.mdp.core import InvalidMdpError, ROW_TOLERANCE, TabularMdp

PARSE_TOLERANCE = 1e-9

Source = Union[str, Path, IO[str]]


class MdpFormatError(ValueError):
    """Arquivo malformado; ``line`` aponta a linha (1-based) do problema."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        prefix = f"linha {line}: " if line is not None else ""
        super().__init__(prefix + message)


@contextmanager
def open_text(target: Source, mode: str) -> Iterator[IO[str]]:
    if isinstance(target, (str, Path)):
        path = Path(target)
        try:
            handle = path.open(mode, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"Falha ao abrir {path}: {exc}") from exc
        with handle:
            yield handle
    else:
        yield target


def iter_records(handle: IO[str]) -> Iterator[Tuple[int, List[str]]]:
    """Itera ``(número da linha, tokens)`` ignorando comentários e linhas vazias."""
    for number, raw in enumerate(handle, start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield number, content.split()


def parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError as exc:
        raise MdpFormatError(f"{what} inválido: {token!r}", line) from exc


def check_index(value: int, upper: int, line: int, what: str) -> int:
    if not 0 <= value < upper:
        raise MdpFormatError(f"{what} fora do intervalo [0, {upper}): {value}", line)
    return value


def parse_mdp(source: Source) -> TabularMdp:
    """Lê um MDP no formato texto (caminho ou stream)."""
    with open_text(source, "r") as handle:
        records = iter_records(handle)
        header = next(records, None)
        if header is None:
            raise MdpFormatError("arquivo vazio (cabeçalho 'mdp' ausente)")
        header_line, tokens = header
        if tokens[0] != "mdp" or len(tokens) != 5:
            raise MdpFormatError("cabeçalho esperado: 'mdp <S> <A> <s0> <reset_action>'", header_line)
        num_states = parse_int(tokens[1], header_line, "S")
        num_actions = parse_int(tokens[2], header_line, "A")
        if num_states < 1 or num_actions < 1:
            raise MdpFormatError("S e A devem ser positivos", header_line)
        s0 = check_index(parse_int(tokens[3], header_line, "s0"), num_states, header_line, "s0")
        reset = check_index(parse_int(tokens[4], header_line, "reset_action"), num_actions, header_line, "reset_action")

        kernel = np.zeros((num_states, num_actions, num_states))
        first_line = np.full((num_states, num_actions), header_line, dtype=np.int64)
        seen = np.zeros_like(kernel, dtype=bool)
        for number, tokens in records:
            if tokens[0] != "t" or len(tokens) != 5:
                raise MdpFormatError("linha de transição esperada: 't <s> <a> <s_next> <prob>'", number)
            s = check_index(parse_int(tokens[1], number, "s"), num_states, number, "s")
            a = check_index(parse_int(tokens[2], number, "a"), num_actions, number, "a")
            s_next = check_index(parse_int(tokens[3], number, "s_next"), num_states, number, "s_next")
            try:
                prob = float(tokens[4])
            except ValueError as exc:
                raise MdpFormatError(f"probabilidade inválida: {tokens[4]!r}", number) from exc
            if not 0.0 <= prob <= 1.0:
                raise MdpFormatError(f"probabilidade fora de [0, 1]: {prob}", number)
            if seen[s, a, s_next]:
                raise MdpFormatError(f"transição ({s}, {a}, {s_next}) repetida", number)
            if not seen[s, a].any():
                first_line[s, a] = number
            seen[s, a, s_next] = True
            kernel[s, a, s_next] = prob

    sums = kernel.sum(axis=2)
    for s, a in np.argwhere(np.abs(sums - 1.0) > PARSE_TOLERANCE):
        raise MdpFormatError(
            f"linha p(.|{s},{a}) soma {sums[s, a]:.12g} (esperado 1)", int(first_line[s, a])
        )
    drift = np.abs(sums - 1.0) > ROW_TOLERANCE
    if drift.any():
        kernel[drift] /= sums[drift][:, None]
    try:
        return TabularMdp(kernel, initial_state=s0, reset_action=reset)
    except InvalidMdpError as exc:
        raise MdpFormatError(str(exc), header_line) from exc


def write_mdp(mdp: TabularMdp, target: Source, *, title: Optional[str] = None) -> None:
    """Escreve o MDP no formato texto (caminho ou stream)."""
    if isinstance(target, (str, Path)):
        Path(target).parent.mkdir(parents=True, exist_ok=True)
    with open_text(target, "w") as handle:
        if title:
            handle.write(f"# {title}\n")
        handle.write(f"mdp {mdp.num_states} {mdp.num_actions} {mdp.initial_state} {mdp.reset_action}\n")
        for s, a, s_next in np.argwhere(mdp.transition > 0.0):
            handle.write(f"t {s} {a} {s_next} {mdp.transition[s, a, s_next]:.17g}\n")


def dumps_mdp(mdp: TabularMdp) -> str:
    buffer = io.StringIO()
    write_mdp(mdp, buffer)
    return buffer.getvalue()
