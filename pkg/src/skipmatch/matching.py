from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Matching", "count_matched_endpoints", "ordered_edges"]


@dataclass(frozen=True, eq=False)
class Matching:
    """Ordered sequence of ``(u, v)`` pairs with ``u < v``.

    Order is meaningful: it is the order in which an algorithm committed the
    pairs, which is what the single-worker determinism checks compare.
    """

    pairs: np.ndarray = field(repr=False)

    def __post_init__(self):
        pairs = np.array(self.pairs, dtype=np.int64).reshape(-1, 2)
        pairs.flags.writeable = False
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return int(self.pairs.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return np.array_equal(self.pairs, other.pairs)

    __hash__ = None

    def endpoints(self) -> np.ndarray:
        return self.pairs.reshape(-1)

    def as_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.pairs}

    def __repr__(self) -> str:
        if len(self) <= 8:
            return f"Matching({sorted(self.as_set())})"
        return f"Matching(<{len(self)} pairs>)"


def count_matched_endpoints(matching: Matching) -> int:
    return 2 * len(matching)


def ordered_edges(edges: np.ndarray, shuffle_seed: int | None = None) -> np.ndarray:
    """Edge array in traversal order: as stored, or permuted by ``shuffle_seed``."""
    if shuffle_seed is None:
        return edges
    perm = np.random.default_rng(shuffle_seed).permutation(edges.shape[0])
    return edges[perm]
