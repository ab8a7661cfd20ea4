"""Lim-Chung iterative maximal matching, shared-memory bulk-synchronous form.

Each iteration every unmatched vertex nominates its unmatched neighbor of
lowest live degree (ties to the smaller id); mutual nominations become
matches. The loop ends with the first iteration that adds no pair.

Per iteration, workers own contiguous vertex ranges and meet at a barrier
after each of three steps:

1. recount live degrees (unmatched neighbor slots; parallel edges count
   once per copy); vertices left with none retire for good
2. write ``choice[v]``
3. mark ``v`` matched when ``choice[choice[v]] == v``

Steps 1 and 2 together form the selection phase. Step 1 needs its own
barrier because step 2 reads neighbors' fresh degrees.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._workers import resolve_workers, run_threads
from .graph import Graph
from .matching import Matching, count_matched_endpoints

__all__ = ["LimChungMetrics", "count_matched_endpoints", "run_limchung"]

NONE = -1


@dataclass(frozen=True)
class LimChungMetrics:
    iterations: int
    matched_pairs: int
    wall_time: float
    workers: int


@njit(nogil=True, cache=True)
def _recount(offsets, nbrs, matched, retired, live, lo, hi):
    for v in range(lo, hi):
        if matched[v] or retired[v]:
            continue
        d = 0
        for j in range(offsets[v], offsets[v + 1]):
            w = nbrs[j]
            if w != v and not matched[w]:
                d += 1
        live[v] = d
        if d == 0:
            retired[v] = True


@njit(nogil=True, cache=True)
def _choose(offsets, nbrs, matched, retired, live, choice, lo, hi):
    for v in range(lo, hi):
        if matched[v] or retired[v]:
            choice[v] = NONE
            continue
        best = NONE
        best_deg = 0
        for j in range(offsets[v], offsets[v + 1]):
            w = nbrs[j]
            if w == v or matched[w]:
                continue
            dw = live[w]
            if best == NONE or dw < best_deg or (dw == best_deg and w < best):
                best = w
                best_deg = dw
        choice[v] = best


@njit(nogil=True, cache=True)
def _commit(matched, choice, lo, hi, it, buf, nbuf):
    added = 0
    for v in range(lo, hi):
        w = choice[v]
        if w == NONE or choice[w] != v:
            continue
        matched[v] = True
        if v < w:
            buf[nbuf, 0] = v
            buf[nbuf, 1] = w
            buf[nbuf, 2] = it
            nbuf += 1
            added += 1
    return nbuf, added


def _vertex_ranges(n: int, workers: int) -> list[tuple[int, int]]:
    base, extra = divmod(n, workers)
    out, lo = [], 0
    for w in range(workers):
        hi = lo + base + (1 if w < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def _warm_up() -> None:
    g = Graph(2, np.array([[0, 1]]))
    off, nbr = g.csr_offsets, g.csr_neighbors
    matched = np.zeros(2, np.bool_)
    retired = np.zeros(2, np.bool_)
    live = np.zeros(2, np.int64)
    choice = np.zeros(2, np.int64)
    _recount(off, nbr, matched, retired, live, 0, 2)
    _choose(off, nbr, matched, retired, live, choice, 0, 2)
    _commit(matched, choice, 0, 2, 0, np.zeros((2, 3), np.int64), 0)


def run_limchung(
    graph: Graph, workers: int | None = None, timeout: float | None = None
) -> tuple[Matching, LimChungMetrics]:
    """Run the baseline to convergence.

    ``iterations`` counts every executed iteration, including the final one
    that adds nothing. Pairs are returned ordered by (iteration, smaller id).
    Wall time excludes CSR construction.
    """
    workers = resolve_workers(workers)
    _warm_up()
    n = graph.num_vertices
    offsets, nbrs = graph.csr_offsets, graph.csr_neighbors

    matched = np.zeros(n, dtype=np.bool_)
    retired = np.zeros(n, dtype=np.bool_)
    live = np.zeros(n, dtype=np.int64)
    choice = np.full(n, NONE, dtype=np.int64)
    ranges = _vertex_ranges(n, workers)
    buffers = [np.empty((hi - lo, 3), dtype=np.int64) for lo, hi in ranges]
    fill = [0] * workers
    added = [0] * workers
    state = {"iterations": 0, "stop": False}

    def end_of_iteration():
        state["iterations"] += 1
        if sum(added) == 0:
            state["stop"] = True

    step = threading.Barrier(workers)
    iteration = threading.Barrier(workers, action=end_of_iteration)

    def task(w):
        lo, hi = ranges[w]

        def body():
            try:
                while True:
                    it = state["iterations"]
                    _recount(offsets, nbrs, matched, retired, live, lo, hi)
                    step.wait()
                    _choose(offsets, nbrs, matched, retired, live, choice, lo, hi)
                    step.wait()
                    fill[w], added[w] = _commit(matched, choice, lo, hi, it, buffers[w], fill[w])
                    iteration.wait()
                    if state["stop"]:
                        return
            except BaseException:
                step.abort()
                iteration.abort()
                raise

        return body

    elapsed = run_threads([task(w) for w in range(workers)], timeout=timeout)

    rows = np.concatenate([b[:f] for b, f in zip(buffers, fill)] or [np.empty((0, 3), np.int64)])
    rows = rows[np.lexsort((rows[:, 0], rows[:, 2]))]
    matching = Matching(rows[:, :2])

    if graph.num_edges:
        e = graph.edges
        open_edges = (e[:, 0] != e[:, 1]) & ~matched[e[:, 0]] & ~matched[e[:, 1]]
        if np.any(open_edges):
            raise RuntimeError("Lim-Chung stopped with an uncovered edge; matching not maximal")

    metrics = LimChungMetrics(
        iterations=state["iterations"],
        matched_pairs=len(matching),
        wall_time=elapsed,
        workers=workers,
    )
    return matching, metrics
