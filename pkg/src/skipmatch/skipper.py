"""Skipper: single-pass asynchronous maximal matching.

Every vertex owns one byte of shared state:

    0  accessible
    1  reserved   (transient, held by exactly one worker)
    2  matched    (absorbing)

A worker handling edge ``(x, y)`` orders the endpoints as ``u < v``, reserves
``u`` with CAS 0->1, then tries CAS 0->2 on ``v``. Success makes ``u`` matched
as well; if some other worker matches ``v`` first, ``u`` is released again.
Because every worker reserves the smaller endpoint first, waits can only
point from a smaller id to a larger one, so no cycle of waiters can form.

Each edge is fetched once. Contention is resolved by spinning on the two
endpoint cells, never by revisiting the edge later.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._atomics import cas_u8, cpu_relax, load_u8, sched_yield, store_u8
from ._workers import resolve_workers, run_threads
from .graph import Graph
from .matching import Matching, ordered_edges

__all__ = [
    "ACCESSIBLE",
    "MATCHED",
    "RESERVED",
    "SkipperMetrics",
    "new_vertex_states",
    "partition_edges",
    "process_edge",
    "run_skipper",
]

ACCESSIBLE = np.uint8(0)
RESERVED = np.uint8(1)
MATCHED = np.uint8(2)

# process_edge outcomes
SKIPPED = 0
MATCHED_EDGE = 1

# slots of the per-worker counter array
CAS_COUNT = 0
PAIR_COUNT = 1
EDGE_COUNT = 2
N_COUNTERS = 3

SPINS_PER_YIELD = 64


@dataclass(frozen=True)
class SkipperMetrics:
    cas_executions: int
    matched_pairs: int
    wall_time: float
    workers: int
    edges_processed: int


def new_vertex_states(num_vertices: int) -> np.ndarray:
    return np.zeros(num_vertices, dtype=np.uint8)


@njit(nogil=True, cache=True)
def _backoff(spins):
    cpu_relax()
    spins += 1
    if spins % SPINS_PER_YIELD == 0:
        sched_yield()
    return spins


@njit(nogil=True, cache=True, inline="always")
def _claim(states, x, y):
    """Core edge protocol. Returns ``(matched, cas_attempts)``."""
    if x == y:
        return False, 0
    u = min(x, y)
    v = max(x, y)
    cas = 0
    spins = 0
    while load_u8(states, u) != 2 and load_u8(states, v) != 2:
        cas += 1
        if not cas_u8(states, u, 0, 1):
            spins = _backoff(spins)
            continue
        while load_u8(states, v) != 2:
            cas += 1
            if cas_u8(states, v, 0, 2):
                # u is exclusively ours; a plain release store suffices
                store_u8(states, u, 2)
                return True, cas
            spins = _backoff(spins)
        store_u8(states, u, 0)
    return False, cas


@njit(nogil=True, cache=True)
def process_edge(states, x, y, buffer, counters):
    """Handle one edge against the shared ``states`` array.

    ``buffer`` is the worker's ``(k, 2)`` pair sink and ``counters`` its
    int64 counter cells (CAS attempts, pairs written, edges handled). Returns
    ``MATCHED_EDGE`` if ``(min(x, y), max(x, y))`` was appended to ``buffer``,
    else ``SKIPPED``.
    """
    counters[EDGE_COUNT] += 1
    matched, cas = _claim(states, x, y)
    counters[CAS_COUNT] += cas
    if not matched:
        return SKIPPED
    k = counters[PAIR_COUNT]
    buffer[k, 0] = min(x, y)
    buffer[k, 1] = max(x, y)
    counters[PAIR_COUNT] = k + 1
    return MATCHED_EDGE


@njit(nogil=True, cache=True)
def _process_range(states, edges, lo, hi, buffer, counters):
    cas_total = 0
    k = 0
    for i in range(lo, hi):
        x = edges[i, 0]
        y = edges[i, 1]
        matched, cas = _claim(states, x, y)
        cas_total += cas
        if matched:
            buffer[k, 0] = min(x, y)
            buffer[k, 1] = max(x, y)
            k += 1
    counters[CAS_COUNT] += cas_total
    counters[PAIR_COUNT] += k
    counters[EDGE_COUNT] += hi - lo


def partition_edges(num_edges: int, workers: int) -> list[range]:
    """Split ``range(num_edges)`` into ``workers`` contiguous, balanced ranges.

    Sizes differ by at most one; the first ``num_edges % workers`` ranges get
    the extra edge.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    base, extra = divmod(num_edges, workers)
    out = []
    lo = 0
    for w in range(workers):
        hi = lo + base + (1 if w < extra else 0)
        out.append(range(lo, hi))
        lo = hi
    return out


@functools.lru_cache(maxsize=None)
def _warm_up() -> None:
    # compile (or load from cache) before anything is timed
    states = new_vertex_states(2)
    buf = np.zeros((1, 2), dtype=np.int64)
    ctr = np.zeros(N_COUNTERS, dtype=np.int64)
    edges = np.array([[0, 1]], dtype=np.int64)
    _process_range(states, edges, 0, 1, buf, ctr)
    edges.flags.writeable = False  # Graph.edges is read-only: separate specialization
    _process_range(states, edges, 0, 1, buf, ctr)


def run_skipper(
    graph: Graph,
    workers: int | None = None,
    shuffle_seed: int | None = None,
    states: np.ndarray | None = None,
    timeout: float | None = None,
) -> tuple[Matching, SkipperMetrics]:
    """Compute a maximal matching of ``graph`` in one pass over its edges.

    Edges are traversed in stored order, or permuted by ``shuffle_seed``, and
    split into contiguous per-worker ranges. Per-worker match buffers are
    concatenated in worker order at the end.

    ``states`` may be passed in (``uint8`` zeros of length ``|V|``) to inspect
    the final vertex states. ``timeout`` bounds the pass and raises
    :class:`TimeoutError` if exceeded.
    """
    workers = resolve_workers(workers)
    _warm_up()
    n = graph.num_vertices
    if states is None:
        states = new_vertex_states(n)
    elif states.dtype != np.uint8 or states.shape != (n,) or not states.flags.c_contiguous:
        raise ValueError("states must be a contiguous uint8 array of length |V|")
    else:
        states[:] = ACCESSIBLE

    edges = ordered_edges(graph.edges, shuffle_seed)
    ranges = partition_edges(edges.shape[0], workers)
    cap = n // 2 + 1
    buffers = [np.empty((min(len(r), cap), 2), dtype=np.int64) for r in ranges]
    counters = [np.zeros(N_COUNTERS, dtype=np.int64) for _ in ranges]

    def task(w):
        r = ranges[w]
        return lambda: _process_range(states, edges, r.start, r.stop, buffers[w], counters[w])

    elapsed = run_threads([task(w) for w in range(workers)], timeout=timeout)

    if np.any(states == RESERVED):
        raise RuntimeError("vertex left in reserved state after the pass; protocol violated")
    totals = np.sum(counters, axis=0)
    pairs = np.concatenate(
        [b[: c[PAIR_COUNT]] for b, c in zip(buffers, counters)] or [np.empty((0, 2), np.int64)]
    )
    if int(totals[EDGE_COUNT]) != edges.shape[0]:
        raise RuntimeError("edge count mismatch: some edge was not handled exactly once")
    metrics = SkipperMetrics(
        cas_executions=int(totals[CAS_COUNT]),
        matched_pairs=int(totals[PAIR_COUNT]),
        wall_time=elapsed,
        workers=workers,
        edges_processed=int(totals[EDGE_COUNT]),
    )
    return Matching(pairs), metrics
