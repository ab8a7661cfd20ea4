"""Shared-memory maximal matching: Skipper plus Lim-Chung and greedy baselines."""

__version__ = "0.1.0"

from .bench import CompareSummary, RunMetrics, compare_report, run_algorithm
from .graph import (
    GeneratorSpec,
    Graph,
    GraphFormatError,
    build_csr,
    generate,
    load_edge_list,
    load_edge_list_binary,
    load_edge_list_text,
    write_edge_list_binary,
    write_edge_list_text,
)
from .greedy import run_greedy
from .limchung import LimChungMetrics, run_limchung
from .matching import Matching, count_matched_endpoints
from .skipper import SkipperMetrics, partition_edges, process_edge, run_skipper
from .validation import (
    MatchingReport,
    brute_force_maximum_matching,
    check_matching,
    check_state_consistency,
)

__all__ = [
    "CompareSummary",
    "GeneratorSpec",
    "Graph",
    "GraphFormatError",
    "LimChungMetrics",
    "Matching",
    "MatchingReport",
    "RunMetrics",
    "SkipperMetrics",
    "brute_force_maximum_matching",
    "build_csr",
    "check_matching",
    "check_state_consistency",
    "compare_report",
    "count_matched_endpoints",
    "generate",
    "load_edge_list",
    "load_edge_list_binary",
    "load_edge_list_text",
    "partition_edges",
    "process_edge",
    "run_algorithm",
    "run_greedy",
    "run_limchung",
    "run_skipper",
    "write_edge_list_binary",
    "write_edge_list_text",
]
