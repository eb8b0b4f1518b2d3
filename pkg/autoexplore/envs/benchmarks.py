"""Geradores dos MDPs de referência.

Todo ambiente acrescenta RESET como última ação (índice ``A - 1``).
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Dict, Mapping

import numpy as np

from autoexplore.mdp.core import TabularMdp
from autoexplore.mdp.io import parse_mdp

FILE_PREFIX = "file:"


class UnknownEnvironmentError(ValueError):
    """Erro disparado quando o descritor não corresponde a nenhum ambiente conhecido."""


def _with_reset(kernel: np.ndarray, initial_state: int) -> np.ndarray:
    num_states, num_actions, _ = kernel.shape
    full = np.zeros((num_states, num_actions + 1, num_states))
    full[:, :num_actions] = kernel
    full[:, num_actions, initial_state] = 1.0
    return full


def make_confusing_chain(
    C: int = 5,
    Kc: int = 6,
    m: int = 4,
    p_skip: float = 1.0 / 3.0,
    p_c: float = 1.0,
) -> TabularMdp:
    """Cadeia com ``C`` estados, ``Kc`` estados confusos e ações a0 (avança), a1 (salta).

    Índices: ``s0``, cadeia ``s1..sC``, confusos ``s(C+1)..s(C+Kc)``.
    """
    if C < 1 or Kc < 1 or m < 1:
        raise ValueError("C, Kc e m devem ser >= 1.")
    if not 0.0 <= p_skip <= 1.0 or not 0.0 < p_c <= 1.0:
        raise ValueError("p_skip deve estar em [0, 1] e p_c em (0, 1].")
    num_states = 1 + C + Kc
    kernel = np.zeros((num_states, 2, num_states))
    kernel[0, 0, 1] += p_c
    kernel[0, 0, 0] += 1.0 - p_c
    confusing = np.arange(C + 1, num_states)
    kernel[0, 1, confusing] = 1.0 / Kc
    kernel[confusing, :, C] = 1.0
    for i in range(1, C):
        kernel[i, 0, i + 1] += p_c
        kernel[i, 0, i] += 1.0 - p_c
        kernel[i, 1, min(C, i + m)] += p_skip
        kernel[i, 1, i] += 1.0 - p_skip
    kernel[C, :, 0] = 1.0
    return TabularMdp(_with_reset(kernel, 0), initial_state=0)


def make_combination_lock(N: int = 6) -> TabularMdp:
    """Cadeia de ``N`` estados: a1 anda à direita; a0 volta com pesos harmônicos ``1/(k-l)``."""
    if N < 2:
        raise ValueError("N deve ser >= 2.")
    kernel = np.zeros((N, 2, N))
    kernel[0, 0, 0] = 1.0
    for k in range(1, N):
        weights = 1.0 / (k - np.arange(k))
        kernel[k, 0, :k] = weights / weights.sum()
    for k in range(N - 1):
        kernel[k, 1, k + 1] = 1.0
    kernel[N - 1, 1, N - 1] = 1.0
    initial = max(0, (2 * N) // 3 - 1)
    return TabularMdp(_with_reset(kernel, initial), initial_state=initial)


def make_layered_star() -> TabularMdp:
    """s0, três estados na primeira camada, três na segunda e um estado final.

    A saída de s0 é equiprovável entre as ramificações; o resto é determinístico
    e o estado final fica em laço.
    """
    kernel = np.zeros((8, 1, 8))
    kernel[0, 0, 1:4] = 1.0 / 3.0
    for branch in range(3):
        kernel[1 + branch, 0, 4 + branch] = 1.0
        kernel[4 + branch, 0, 7] = 1.0
    kernel[7, 0, 7] = 1.0
    return TabularMdp(_with_reset(kernel, 0), initial_state=0)


def make_deterministic_chain(n: int = 2) -> TabularMdp:
    """``s0 -> s1 -> ... -> s(n-1)`` com uma ação de avanço; o último estado fica parado."""
    if n < 1:
        raise ValueError("n deve ser >= 1.")
    kernel = np.zeros((n, 1, n))
    for s in range(n):
        kernel[s, 0, min(s + 1, n - 1)] = 1.0
    return TabularMdp(_with_reset(kernel, 0), initial_state=0)


ENVIRONMENTS: Dict[str, Callable[..., TabularMdp]] = {
    "confusing-chain": make_confusing_chain,
    "combination-lock": make_combination_lock,
    "layered-star": make_layered_star,
    "chain": make_deterministic_chain,
}


def make_environment(name: str, params: Mapping[str, object] | None = None) -> TabularMdp:
    """Constrói o ambiente a partir do descritor (nome registrado ou ``file:<caminho>``)."""
    params = dict(params or {})
    if name.startswith(FILE_PREFIX):
        if params:
            raise UnknownEnvironmentError("Ambientes lidos de arquivo não aceitam parâmetros.")
        path = Path(name[len(FILE_PREFIX):])
        if not path.exists():
            raise FileNotFoundError(f"Arquivo de MDP não encontrado: {path}")
        return parse_mdp(path)
    builder = ENVIRONMENTS.get(name)
    if builder is None:
        raise UnknownEnvironmentError(
            f"Ambiente '{name}' desconhecido. Disponíveis: {', '.join(sorted(ENVIRONMENTS))} ou file:<caminho>"
        )
    try:
        return builder(**params)
    except TypeError as exc:
        raise UnknownEnvironmentError(f"Parâmetros inválidos para '{name}': {exc}") from exc
