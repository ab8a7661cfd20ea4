"""Sequential greedy maximal matching over a fixed edge order."""

from __future__ import annotations

import functools

import numpy as np
from numba import njit

from .graph import Graph
from .matching import Matching, ordered_edges

__all__ = ["run_greedy"]


@njit(cache=True)
def _greedy(edges, n):
    matched = np.zeros(n, dtype=np.bool_)
    out = np.empty((min(edges.shape[0], n // 2 + 1), 2), dtype=np.int64)
    k = 0
    for i in range(edges.shape[0]):
        x = edges[i, 0]
        y = edges[i, 1]
        if x == y or matched[x] or matched[y]:
            continue
        matched[x] = True
        matched[y] = True
        out[k, 0] = min(x, y)
        out[k, 1] = max(x, y)
        k += 1
    return out[:k]


@functools.lru_cache(maxsize=None)
def warm_up() -> None:
    edges = np.array([[0, 1]], dtype=np.int64)
    _greedy(edges, 2)
    edges.flags.writeable = False
    _greedy(edges, 2)


def run_greedy(graph: Graph, shuffle_seed: int | None = None) -> Matching:
    """Take each edge, in order, whose endpoints are both still free."""
    edges = ordered_edges(graph.edges, shuffle_seed)
    if graph.num_vertices == 0:
        return Matching(np.empty((0, 2), dtype=np.int64))
    return Matching(_greedy(np.ascontiguousarray(edges), graph.num_vertices))
