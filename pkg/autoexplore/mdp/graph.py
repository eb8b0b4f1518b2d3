"""Reachability helpers on transition support graphs."""

from __future__ import annotations

from typing import Iterable, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph


def backward_reachable(successors: np.ndarray, sources: Iterable[int]) -> np.ndarray:
    """Mask of nodes having a directed path to some node in ``sources``.

    ``successors`` is an ``(n, n)`` adjacency matrix (dense boolean array or
    scipy sparse matrix). Sources are included in the result.
    """
    targets = np.fromiter(sources, dtype=np.int64)
    n = successors.shape[0]
    mask = np.zeros(n, dtype=bool)
    if targets.size == 0:
        return mask
    src, dst = successors.nonzero()
    # nó virtual n aponta para todas as fontes no grafo reverso
    rows = np.concatenate([dst, np.full(targets.size, n)])
    cols = np.concatenate([src, targets])
    graph = sparse.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(n + 1, n + 1))
    order = csgraph.breadth_first_order(graph, n, directed=True, return_predecessors=False)
    mask[order[order != n]] = True
    return mask


def almost_sure_states(
    support: np.ndarray,
    allowed: np.ndarray,
    goal_mask: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """States from which some allowed policy reaches a goal with probability 1.

    ``support`` is ``(n, A, n)``, ``allowed`` is ``(n, A)``. Returns the state
    mask and the ``(n, A)`` mask of actions that never leave that set; any
    policy choosing among those actions and reaching the goal with positive
    probability is proper there.
    """
    n = support.shape[0]
    alive = np.ones(n, dtype=bool)
    goals = np.flatnonzero(goal_mask)
    while True:
        stays = allowed & ~np.any(support & ~alive[None, None, :], axis=2)
        stays[~alive] = False
        edges = np.any(support & stays[:, :, None], axis=1)
        reach = backward_reachable(edges, goals) & alive
        reach[goals] = True
        if np.array_equal(reach, alive):
            return alive, stays
        alive = reach
