"""Immutable graph container, edge-list I/O and synthetic generators.

A :class:`Graph` keeps the edge list exactly as supplied (order and
duplicates preserved) and derives a symmetrized CSR view on first use.
"""

from __future__ import annotations

import math
import re
import struct
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from numba import njit

__all__ = [
    "BINARY_MAGIC",
    "GeneratorSpec",
    "Graph",
    "GraphFormatError",
    "build_csr",
    "generate",
    "load_edge_list",
    "load_edge_list_binary",
    "load_edge_list_text",
    "write_edge_list_binary",
    "write_edge_list_text",
]

BINARY_MAGIC = b"SKPEL1\x00\x00"
_HEADER = struct.Struct("<8sQQ")
_MAX_ID = np.iinfo(np.int64).max
_VERTICES_RE = re.compile(r"^[#%]\s*vertices\s*:\s*(\S+)\s*$", re.IGNORECASE)

MAX_COMPLETE_N = 65536
FAMILIES = ("path", "cycle", "star", "complete", "gnm_random", "rmat")


class GraphFormatError(ValueError):
    """Malformed edge-list input or out-of-range vertex ids."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected (multi)graph over dense vertex ids ``0..num_vertices-1``.

    ``edges`` is an ``(m, 2)`` int64 array in traversal order. Self-loops and
    repeated edges are kept. The CSR arrays list every non-loop edge under
    both endpoints and a self-loop twice under its vertex, so the degree sum
    is always ``2 * m``.
    """

    num_vertices: int
    edges: np.ndarray = field(repr=False)

    def __post_init__(self):
        edges = np.array(self.edges, dtype=np.int64, copy=True).reshape(-1, 2)
        if edges.size:
            lo, hi = int(edges.min()), int(edges.max())
            if lo < 0 or hi >= self.num_vertices:
                raise GraphFormatError(
                    f"vertex id out of range [0, {self.num_vertices}): saw {lo if lo < 0 else hi}"
                )
        if self.num_vertices < 0:
            raise GraphFormatError("num_vertices must be non-negative")
        object.__setattr__(self, "edges", _frozen(edges))

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray]:
        offsets, neighbors = _csr_arrays(self.edges, self.num_vertices)
        return _frozen(offsets), _frozen(neighbors)

    @property
    def csr_offsets(self) -> np.ndarray:
        return self._csr[0]

    @property
    def csr_neighbors(self) -> np.ndarray:
        return self._csr[1]

    def degrees(self) -> np.ndarray:
        return np.diff(self.csr_offsets)

    def neighbors(self, v: int) -> np.ndarray:
        off = self.csr_offsets
        return self.csr_neighbors[off[v]:off[v + 1]]

    @cached_property
    def sorted_edge_keys(self) -> np.ndarray:
        """Sorted ``min * n + max`` keys of all edges, for membership queries."""
        n = max(self.num_vertices, 1)
        u = self.edges.min(axis=1)
        v = self.edges.max(axis=1)
        return _frozen(np.sort(u * n + v))

    def edges_from_csr(self) -> np.ndarray:
        """Canonical ``(min, max)`` edge multiset recovered from the CSR view.

        Keeps slots with ``u < v`` once and every second self-loop slot, so the
        result equals the canonicalized input edges as a multiset.
        """
        off, nbr = self._csr
        src = np.repeat(np.arange(self.num_vertices, dtype=np.int64), np.diff(off))
        keep = src < nbr
        loops = np.flatnonzero(src == nbr)
        # self-loop slots are adjacent after sorting; take every other one
        pick = np.zeros(len(nbr), dtype=bool)
        pick[loops[::2]] = True
        keep |= pick
        return np.stack([src[keep], nbr[keep]], axis=1)

    def same_as(self, other: "Graph") -> bool:
        return self.num_vertices == other.num_vertices and np.array_equal(self.edges, other.edges)

    def __repr__(self) -> str:
        return f"Graph(num_vertices={self.num_vertices}, num_edges={self.num_edges})"


@njit(cache=True)
def _csr_fill(edges, n):
    deg = np.zeros(n + 1, dtype=np.int64)
    m = edges.shape[0]
    for i in range(m):
        deg[edges[i, 0] + 1] += 1
        deg[edges[i, 1] + 1] += 1
    offsets = np.cumsum(deg)
    cursor = offsets[:-1].copy()
    neighbors = np.empty(2 * m, dtype=np.int64)
    for i in range(m):
        u = edges[i, 0]
        v = edges[i, 1]
        neighbors[cursor[u]] = v
        cursor[u] += 1
        neighbors[cursor[v]] = u
        cursor[v] += 1
    for v in range(n):
        lo = offsets[v]
        hi = offsets[v + 1]
        if hi - lo > 1:
            neighbors[lo:hi] = np.sort(neighbors[lo:hi])
    return offsets, neighbors


def _csr_arrays(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    if n == 0:
        return np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return _csr_fill(np.ascontiguousarray(edges, dtype=np.int64), n)


def build_csr(edges, num_vertices: int) -> Graph:
    """Build a :class:`Graph` from an edge sequence, materializing its CSR view.

    Neighbor lists are sorted ascending; a self-loop ``(v, v)`` puts ``v`` twice
    into its own list.
    """
    g = Graph(int(num_vertices), np.asarray(edges, dtype=np.int64).reshape(-1, 2))
    g._csr  # noqa: B018 - force construction
    return g


# ---------------------------------------------------------------------------
# Edge-list files


def _parse_id(tok: str, lineno: int) -> int:
    try:
        val = int(tok, 10)
    except ValueError:
        raise GraphFormatError(f"line {lineno}: cannot parse vertex id {tok!r}") from None
    if val < 0:
        raise GraphFormatError(f"line {lineno}: negative vertex id {val}")
    if val >= _MAX_ID:
        raise GraphFormatError(f"line {lineno}: vertex id {val} overflows 63-bit range")
    return val


def load_edge_list_text(path) -> Graph:
    """Read a whitespace-separated ``u v`` edge list.

    Lines starting with ``#`` or ``%`` are comments; ``# vertices: N`` fixes
    the vertex count, otherwise it is ``1 + max id``.
    """
    us: list[int] = []
    vs: list[int] = []
    declared = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line[0] in "#%":
                m = _VERTICES_RE.match(line)
                if m:
                    declared = _parse_id(m.group(1), lineno)
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: expected 'u v', got {line!r}")
            us.append(_parse_id(parts[0], lineno))
            vs.append(_parse_id(parts[1], lineno))
    edges = np.empty((len(us), 2), dtype=np.int64)
    edges[:, 0] = us
    edges[:, 1] = vs
    top = int(edges.max()) + 1 if len(us) else 0
    if declared is None:
        n = top
    else:
        if top > declared:
            raise GraphFormatError(f"vertex id {top - 1} exceeds declared vertex count {declared}")
        n = declared
    return Graph(n, edges)


def write_edge_list_text(graph: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# vertices: {graph.num_vertices}\n")
        if graph.num_edges:
            np.savetxt(fh, graph.edges, fmt="%d")


def load_edge_list_binary(path) -> Graph:
    """Read the ``SKPEL1`` binary format (24-byte header, u64 little-endian pairs)."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise GraphFormatError(f"{path}: truncated header ({len(data)} bytes)")
    magic, n, m = _HEADER.unpack_from(data)
    if magic != BINARY_MAGIC:
        raise GraphFormatError(f"{path}: bad magic {magic!r}")
    payload = len(data) - _HEADER.size
    if payload != 16 * m:
        raise GraphFormatError(f"{path}: expected {16 * m} payload bytes for {m} edges, found {payload}")
    raw = np.frombuffer(data, dtype="<u8", offset=_HEADER.size, count=2 * m)
    if m and int(raw.max()) >= _MAX_ID:
        raise GraphFormatError(f"{path}: vertex id overflows 63-bit range")
    if n >= _MAX_ID:
        raise GraphFormatError(f"{path}: vertex count {n} overflows 63-bit range")
    return Graph(int(n), raw.astype(np.int64).reshape(-1, 2))


def write_edge_list_binary(graph: Graph, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(BINARY_MAGIC, graph.num_vertices, graph.num_edges))
        fh.write(graph.edges.astype("<u8").tobytes())


def load_edge_list(path, fmt: str = "text") -> Graph:
    if fmt == "text":
        return load_edge_list_text(path)
    if fmt == "binary":
        return load_edge_list_binary(path)
    raise ValueError(f"unknown edge-list format {fmt!r}")


# ---------------------------------------------------------------------------
# Generators


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of a synthetic graph family.

    ``m`` is required for ``gnm_random`` and ``rmat``; ``rmat_probs`` are the
    quadrant probabilities (a, b, c, d). Defaults follow Graph500.
    """

    family: str
    n: int
    m: int | None = None
    rmat_probs: tuple[float, float, float, float] = (0.57, 0.19, 0.19, 0.05)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.family in ("gnm_random", "rmat"):
            if self.m is None or self.m < 0:
                raise ValueError(f"{self.family} needs a non-negative edge count m")
        probs = tuple(float(p) for p in self.rmat_probs)
        if len(probs) != 4 or any(p < 0 for p in probs):
            raise ValueError("rmat_probs must be four non-negative numbers")
        if abs(sum(probs) - 1.0) > 1e-9:
            raise ValueError(f"rmat_probs must sum to 1, got {sum(probs)!r}")
        object.__setattr__(self, "rmat_probs", probs)
        if self.family == "complete" and self.n > MAX_COMPLETE_N:
            raise ValueError(f"complete graph with n={self.n} refused (limit {MAX_COMPLETE_N})")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    def label(self) -> str:
        parts = [self.family, f"n={self.n}"]
        if self.m is not None:
            parts.append(f"m={self.m}")
        if self.family == "rmat":
            parts.append("p=" + ",".join(f"{p:g}" for p in self.rmat_probs))
        if self.family in ("gnm_random", "rmat"):
            parts.append(f"seed={self.seed}")
        return ":".join(parts)


def _rmat_edges(rng: np.random.Generator, n: int, m: int, probs) -> np.ndarray:
    if n == 1:
        return np.zeros((m, 2), dtype=np.int64)
    scale = math.ceil(math.log2(n))
    a, b, c, _ = probs
    ab, abc = a + b, a + b + c
    out = np.empty((0, 2), dtype=np.int64)
    need = m
    while need:
        u = np.zeros(need, dtype=np.int64)
        v = np.zeros(need, dtype=np.int64)
        for _level in range(scale):
            r = rng.random(need)
            down = r >= ab                      # quadrants c, d
            right = ((r >= a) & (r < ab)) | (r >= abc)  # quadrants b, d
            u = (u << 1) | down
            v = (v << 1) | right
        ok = (u < n) & (v < n)
        batch = np.stack([u[ok], v[ok]], axis=1)
        out = batch if not len(out) else np.concatenate([out, batch])
        need = m - len(out)
    return out


def generate(spec: GeneratorSpec) -> Graph:
    """Materialize ``spec`` as a :class:`Graph`; a pure function of ``spec``."""
    n, fam = spec.n, spec.family
    if fam == "path":
        i = np.arange(n - 1, dtype=np.int64)
        edges = np.stack([i, i + 1], axis=1)
    elif fam == "cycle":
        i = np.arange(n - 1, dtype=np.int64)
        edges = np.concatenate([np.stack([i, i + 1], axis=1), [[n - 1, 0]]]).astype(np.int64)
    elif fam == "star":
        i = np.arange(1, n, dtype=np.int64)
        edges = np.stack([np.zeros_like(i), i], axis=1)
    elif fam == "complete":
        u, v = np.triu_indices(n, k=1)
        edges = np.stack([u, v], axis=1).astype(np.int64)
    elif fam == "gnm_random":
        rng = np.random.default_rng(spec.seed)
        edges = rng.integers(0, n, size=(spec.m, 2), dtype=np.int64)
    else:
        rng = np.random.default_rng(spec.seed)
        edges = _rmat_edges(rng, n, spec.m, spec.rmat_probs)
    return Graph(n, edges)
