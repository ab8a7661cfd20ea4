"""Correctness checks for matchings and Skipper's final vertex states."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .graph import Graph
from .matching import Matching

__all__ = [
    "BRUTE_FORCE_MAX_VERTICES",
    "MatchingReport",
    "brute_force_maximum_matching",
    "check_matching",
    "check_state_consistency",
]

MAX_VIOLATIONS = 100
BRUTE_FORCE_MAX_VERTICES = 24


@dataclass
class MatchingReport:
    valid: bool
    maximal: bool
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.valid and self.maximal


def check_matching(graph: Graph, matching: Matching) -> MatchingReport:
    """Check that ``matching`` is a matching of ``graph`` and that it is maximal.

    Self-loops are ignored by the maximality scan. Never raises; at most
    ``MAX_VIOLATIONS`` messages are collected.
    """
    n = graph.num_vertices
    pairs = matching.pairs
    violations: list[str] = []

    def note(msg):
        if len(violations) < MAX_VIOLATIONS:
            violations.append(msg)

    valid = True
    if len(pairs):
        u, v = pairs[:, 0], pairs[:, 1]
        bad_range = (u < 0) | (v < 0) | (u >= n) | (v >= n)
        for i in np.flatnonzero(bad_range)[:MAX_VIOLATIONS]:
            note(f"pair ({u[i]}, {v[i]}) has a vertex outside [0, {n})")
        bad_order = ~bad_range & (u >= v)
        for i in np.flatnonzero(bad_order)[:MAX_VIOLATIONS]:
            note(f"pair ({u[i]}, {v[i]}) is not ordered as u < v")
        if bad_range.any() or bad_order.any():
            valid = False
        ok = ~bad_range & ~bad_order
        keys = u[ok] * max(n, 1) + v[ok]
        edge_keys = graph.sorted_edge_keys
        pos = np.searchsorted(edge_keys, keys)
        pos = np.minimum(pos, max(len(edge_keys) - 1, 0))
        present = (edge_keys[pos] == keys) if len(edge_keys) else np.zeros(len(keys), bool)
        for i in np.flatnonzero(~present)[:MAX_VIOLATIONS]:
            note(f"pair ({u[ok][i]}, {v[ok][i]}) is not an edge of the graph")
        if not present.all():
            valid = False
        ends = pairs[~bad_range].reshape(-1)
        counts = np.bincount(ends, minlength=n)
        for x in np.flatnonzero(counts > 1)[:MAX_VIOLATIONS]:
            note(f"vertex {x} occurs in {counts[x]} pairs")
        if (counts > 1).any():
            valid = False
        covered = counts > 0
    else:
        covered = np.zeros(n, dtype=bool)

    e = graph.edges
    if len(e):
        open_edges = (e[:, 0] != e[:, 1]) & ~covered[e[:, 0]] & ~covered[e[:, 1]]
        idx = np.flatnonzero(open_edges)
        for i in idx[:MAX_VIOLATIONS]:
            note(f"edge ({e[i, 0]}, {e[i, 1]}) has no matched endpoint")
        maximal = idx.size == 0
    else:
        maximal = True
    return MatchingReport(valid=valid, maximal=maximal, violations=violations)


def check_state_consistency(states: np.ndarray, matching: Matching) -> bool:
    """True iff no vertex is reserved and exactly the matched endpoints are in state 2."""
    states = np.asarray(states)
    if np.any(states == 1):
        return False
    if np.any((states != 0) & (states != 2)):
        return False
    expected = np.zeros(states.shape[0], dtype=bool)
    ends = matching.endpoints()
    if len(ends):
        if ends.min() < 0 or ends.max() >= states.shape[0]:
            return False
        expected[ends] = True
        if np.unique(ends).size != ends.size:
            return False
    return bool(np.array_equal(states == 2, expected))


def brute_force_maximum_matching(graph: Graph) -> int:
    """Exact maximum matching size by exhaustive search (|V| <= 24 only).

    Decides vertices in increasing id order: the lowest undecided vertex is
    either left unmatched or paired with a free neighbor. Results are memoized
    on the bitmask of decided vertices.
    """
    n = graph.num_vertices
    if n > BRUTE_FORCE_MAX_VERTICES:
        raise ValueError(f"brute-force search refused for |V|={n} > {BRUTE_FORCE_MAX_VERTICES}")
    adj = [0] * n
    for x, y in graph.edges.tolist():
        if x != y:
            adj[x] |= 1 << y
            adj[y] |= 1 << x
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def best(used: int) -> int:
        if used == full:
            return 0
        free = ~used & full
        v = (free & -free).bit_length() - 1
        taken = used | (1 << v)
        result = best(taken)
        cand = adj[v] & ~taken
        while cand:
            low = cand & -cand
            result = max(result, 1 + best(taken | low))
            cand ^= low
        return result

    return best(0)
