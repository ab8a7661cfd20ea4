"""The generator suite shared by the property and acceptance tests."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from skipmatch import GeneratorSpec, Graph, generate
from skipmatch._workers import available_cpus

SMALL_FAMILIES = ("path", "cycle", "star", "complete")
SMALL_NS = tuple(range(1, 11)) + (1000,)
RMAT_PROBS = (0.57, 0.19, 0.19, 0.05)

MAX_WORKERS = available_cpus()
WORKER_COUNTS = tuple(sorted({1, 2, 4, MAX_WORKERS}))


def small_specs() -> list[GeneratorSpec]:
    return [GeneratorSpec(f, n) for f in SMALL_FAMILIES for n in SMALL_NS]


def random_specs(seed: int = 0) -> list[GeneratorSpec]:
    return [
        GeneratorSpec("gnm_random", 1000, 5000, seed=seed),
        GeneratorSpec("gnm_random", 100_000, 1_000_000, seed=seed),
        GeneratorSpec("rmat", 2**17, 2**21, RMAT_PROBS, seed=seed),
    ]


def suite_specs() -> list[GeneratorSpec]:
    return small_specs() + random_specs()


@lru_cache(maxsize=None)
def suite_graph(spec: GeneratorSpec) -> Graph:
    return generate(spec)


def adversarial_graph(workers: int, replicas: int = 100_000) -> Graph:
    """Edge list that lines up conflicting edges across contiguous worker ranges.

    Each gadget i owns five fresh vertices a..e and the edges
    (a,b), (b,a), (c,d), (d,e), (e,c): an opposite-direction pair and a
    3-cycle. Block j of the list (one block per worker) holds gadget edge
    ``j % 5`` for every gadget, so workers walk the same gadgets in lockstep.
    """
    i = np.arange(replicas, dtype=np.int64)
    a, b, c, d, e = (5 * i + k for k in range(5))
    gadget = [(a, b), (b, a), (c, d), (d, e), (e, c)]
    blocks = [np.stack(gadget[j % 5], axis=1) for j in range(max(workers, 5))]
    return Graph(5 * replicas, np.concatenate(blocks))
