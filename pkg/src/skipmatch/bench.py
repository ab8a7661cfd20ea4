"""Run records and cross-algorithm summaries for the benchmark harness."""

from __future__ import annotations

import math
import statistics
import time
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from .graph import Graph
from .greedy import run_greedy
from .greedy import warm_up as _greedy_warm_up
from .limchung import run_limchung
from .matching import Matching, count_matched_endpoints
from .skipper import new_vertex_states, run_skipper
from .validation import MatchingReport, check_matching, check_state_consistency

__all__ = [
    "ALGORITHMS",
    "CompareSummary",
    "RunMetrics",
    "RunOutcome",
    "compare_report",
    "geomean",
    "run_algorithm",
]

ALGORITHMS = ("skipper", "limchung", "greedy")

_COMMON_KEYS = (
    "algorithm", "graph", "num_vertices", "num_edges", "workers", "seed",
    "shuffle_seed", "repeat", "wall_time_s", "matched_pairs",
    "matched_endpoint_pct", "verified",
)
_EXTRA_KEYS = {
    "skipper": ("cas_executions", "cas_pct"),
    "limchung": ("iterations",),
    "greedy": (),
}
CSV_FIELDS = _COMMON_KEYS + ("cas_executions", "cas_pct", "iterations")


@dataclass
class RunMetrics:
    """One algorithm run on one graph; serializes to a fixed key set per algorithm."""

    algorithm: str
    graph: str
    num_vertices: int
    num_edges: int
    workers: int
    wall_time_s: float
    matched_pairs: int
    matched_endpoint_pct: float
    verified: bool
    seed: int | None = None
    shuffle_seed: int | None = None
    repeat: int = 0
    cas_executions: int | None = None
    cas_pct: float | None = None
    iterations: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        keys = _COMMON_KEYS + _EXTRA_KEYS.get(self.algorithm, ())
        return {k: d[k] for k in keys}

    @classmethod
    def from_dict(cls, d: dict) -> "RunMetrics":
        known = set(CSV_FIELDS)
        return cls(**{k: v for k, v in d.items() if k in known})


@dataclass
class RunOutcome:
    metrics: RunMetrics
    matching: Matching
    report: MatchingReport
    states: np.ndarray | None = None
    state_consistent: bool | None = None


def endpoint_pct(matching: Matching, num_vertices: int) -> float:
    if num_vertices == 0:
        return 0.0
    return 100.0 * count_matched_endpoints(matching) / num_vertices


def run_algorithm(
    graph: Graph,
    algorithm: str,
    workers: int | None = None,
    shuffle_seed: int | None = None,
    label: str = "",
    seed: int | None = None,
    repeat: int = 0,
) -> RunOutcome:
    """Run one algorithm, verify its output and package the metrics.

    ``shuffle_seed`` applies to the edge-order algorithms (skipper, greedy).
    Lim-Chung is vertex-centric and ignores it.
    """
    states = None
    extra: dict = {}
    if algorithm == "skipper":
        states = new_vertex_states(graph.num_vertices)
        matching, sm = run_skipper(graph, workers, shuffle_seed=shuffle_seed, states=states)
        wall, used = sm.wall_time, sm.workers
        extra["cas_executions"] = sm.cas_executions
        extra["cas_pct"] = 100.0 * sm.cas_executions / graph.num_edges if graph.num_edges else 0.0
    elif algorithm == "limchung":
        matching, lm = run_limchung(graph, workers)
        wall, used = lm.wall_time, lm.workers
        extra["iterations"] = lm.iterations
        shuffle_seed = None
    elif algorithm == "greedy":
        _greedy_warm_up()
        t0 = time.perf_counter()
        matching = run_greedy(graph, shuffle_seed)
        wall, used = time.perf_counter() - t0, 1
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")

    report = check_matching(graph, matching)
    consistent = None
    if states is not None:
        consistent = check_state_consistency(states, matching)
        if not consistent:
            report.violations.append("final vertex states disagree with the matching")
    verified = report.ok and consistent is not False
    metrics = RunMetrics(
        algorithm=algorithm,
        graph=label,
        num_vertices=graph.num_vertices,
        num_edges=graph.num_edges,
        workers=used,
        wall_time_s=wall,
        matched_pairs=len(matching),
        matched_endpoint_pct=endpoint_pct(matching, graph.num_vertices),
        verified=verified,
        seed=seed,
        shuffle_seed=shuffle_seed,
        repeat=repeat,
        **extra,
    )
    return RunOutcome(metrics, matching, report, states, consistent)


def geomean(values: Iterable[float]) -> float:
    vals = list(values)
    if not vals:
        raise ValueError("geometric mean of an empty sequence")
    if any(v < 0 for v in vals):
        raise ValueError("geometric mean needs non-negative values")
    if any(v == 0 for v in vals):
        return 0.0
    return math.exp(sum(math.log(v) for v in vals) / len(vals))


@dataclass(frozen=True)
class CompareSummary:
    speedup_geomean: float
    quality_ratio_geomean: float
    cas_pct_geomean: float | None
    graphs: tuple[str, ...] = field(default=())
    per_graph: tuple[dict, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "speedup_geomean": self.speedup_geomean,
            "quality_ratio_geomean": self.quality_ratio_geomean,
            "cas_pct_geomean": self.cas_pct_geomean,
            "graphs": list(self.graphs),
            "per_graph": list(self.per_graph),
        }


def compare_report(records: Iterable[RunMetrics]) -> CompareSummary:
    """Aggregate Skipper-vs-Lim-Chung records into per-graph ratios and geomeans.

    Per graph: speedup is median Lim-Chung time over median Skipper time,
    quality is mean Skipper endpoint percentage over mean Lim-Chung
    percentage. Unverified records are ignored. Every graph must have runs of
    both algorithms.
    """
    groups: dict[str, dict[str, list[RunMetrics]]] = defaultdict(lambda: defaultdict(list))
    for r in records:
        if r.verified and r.algorithm in ("skipper", "limchung"):
            groups[r.graph][r.algorithm].append(r)
    if not groups:
        raise ValueError("no verified skipper/limchung records to compare")
    missing = [
        f"{g}: missing {algo}"
        for g, runs in groups.items()
        for algo in ("skipper", "limchung")
        if not runs[algo]
    ]
    if missing:
        raise ValueError("unpaired runs: " + "; ".join(missing))

    speedups, ratios, cas = [], [], []
    per_graph = []
    for g, runs in groups.items():
        sk, lc = runs["skipper"], runs["limchung"]
        t_sk = max(statistics.median(r.wall_time_s for r in sk), 1e-12)
        t_lc = statistics.median(r.wall_time_s for r in lc)
        q_sk = statistics.fmean(r.matched_endpoint_pct for r in sk)
        q_lc = statistics.fmean(r.matched_endpoint_pct for r in lc)
        ratio = 1.0 if q_lc == 0 and q_sk == 0 else q_sk / q_lc
        speedups.append(t_lc / t_sk)
        ratios.append(ratio)
        row = {"graph": g, "speedup": t_lc / t_sk, "quality_ratio": ratio}
        pct = [r.cas_pct for r in sk if r.cas_pct is not None]
        if pct:
            row["cas_pct"] = statistics.fmean(pct)
            cas.append(row["cas_pct"])
        per_graph.append(row)

    return CompareSummary(
        speedup_geomean=geomean(speedups),
        quality_ratio_geomean=geomean(ratios),
        cas_pct_geomean=geomean(cas) if len(cas) == len(groups) else None,
        graphs=tuple(groups),
        per_graph=tuple(per_graph),
    )
