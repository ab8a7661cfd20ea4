"""Command-line harness.

    skipmatch run --gen rmat --n 1048576 --m 16777216 --algo skipper,limchung
    skipmatch run --input graph.bin --format binary --algo skipper --repeats 5
    skipmatch compare runs.jsonl
    skipmatch convert graph.txt graph.bin --to binary

Exit status: 0 on success, 1 if any run fails verification, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import __version__
from ._workers import default_workers
from .bench import ALGORITHMS, CSV_FIELDS, RunMetrics, compare_report, run_algorithm
from .graph import FAMILIES, GeneratorSpec, GraphFormatError, generate, load_edge_list
from .graph import write_edge_list_binary, write_edge_list_text

log = logging.getLogger("skipmatch")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _algo_list(text: str) -> list[str]:
    algos = [a.strip() for a in text.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad or not algos:
        raise argparse.ArgumentTypeError(
            f"unknown algorithm(s) {', '.join(bad) or '(none)'}; choose from {', '.join(ALGORITHMS)}"
        )
    return algos


def _probs(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad probabilities {text!r}") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("--rmat-probs needs exactly four comma-separated values")
    return vals


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skipmatch", description="Parallel maximal matching benchmarks")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run matching algorithms and emit JSON-lines records")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=Path, help="edge-list file")
    src.add_argument("--gen", choices=FAMILIES, help="synthetic graph family")
    run.add_argument("--format", choices=("text", "binary"), default="text", help="format of --input")
    run.add_argument("--n", type=_positive, help="vertex count for --gen")
    run.add_argument("--m", type=int, help="edge count (gnm_random, rmat)")
    run.add_argument("--rmat-probs", type=_probs, default=(0.57, 0.19, 0.19, 0.05), metavar="a,b,c,d")
    run.add_argument("--algo", type=_algo_list, required=True, metavar="LIST",
                     help=f"comma-separated subset of {','.join(ALGORITHMS)}")
    run.add_argument("--workers", type=_positive, default=None,
                     help="worker threads (default: $SKIPPER_WORKERS or CPU count)")
    run.add_argument("--seed", type=int, default=0, help="generator seed; shuffle seed base")
    run.add_argument("--shuffle", action="store_true",
                     help="permute edge order per repeat (seed + repeat index)")
    run.add_argument("--repeats", type=_positive, default=3)
    run.add_argument("--out", type=Path, help="JSON-lines output file (default stdout)")
    run.add_argument("--csv", type=Path, help="also write records as CSV")

    cmp_ = sub.add_parser("compare", help="summarize skipper vs limchung records")
    cmp_.add_argument("records", type=Path, nargs="+", help="JSON-lines files from 'run'")

    conv = sub.add_parser("convert", help="convert between text and binary edge lists")
    conv.add_argument("src", type=Path)
    conv.add_argument("dst", type=Path)
    conv.add_argument("--from", dest="src_format", choices=("text", "binary"), default="text")
    conv.add_argument("--to", dest="dst_format", choices=("text", "binary"), default="binary")
    return p


def _load_graph(args):
    if args.input is not None:
        if args.n is not None or args.m is not None:
            raise UsageError("--n/--m apply only to --gen")
        return load_edge_list(args.input, args.format), str(args.input)
    if args.n is None:
        raise UsageError("--gen needs --n")
    if args.gen in ("gnm_random", "rmat") and args.m is None:
        raise UsageError(f"--gen {args.gen} needs --m")
    if args.gen not in ("gnm_random", "rmat") and args.m is not None:
        raise UsageError(f"--m does not apply to --gen {args.gen}")
    spec = GeneratorSpec(args.gen, args.n, args.m, tuple(args.rmat_probs), args.seed)
    return generate(spec), spec.label()


def _cmd_run(args) -> int:
    try:
        graph, label = _load_graph(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"skipmatch run: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    workers = args.workers if args.workers is not None else default_workers()
    log.info("graph %s: |V|=%d |E|=%d, workers=%d", label, graph.num_vertices, graph.num_edges, workers)

    records: list[RunMetrics] = []
    failed = False
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for algo in args.algo:
            for r in range(args.repeats):
                shuffle_seed = args.seed + r if args.shuffle else None
                res = run_algorithm(graph, algo, workers, shuffle_seed, label=label, seed=args.seed, repeat=r)
                records.append(res.metrics)
                out.write(json.dumps(res.metrics.to_dict()) + "\n")
                out.flush()
                log.info("%s repeat %d: %.4fs, %d pairs", algo, r, res.metrics.wall_time_s, res.metrics.matched_pairs)
                if not res.metrics.verified:
                    failed = True
                    print(f"verification failed: {algo} repeat {r}", file=sys.stderr)
                    for v in res.report.violations:
                        print(f"  {v}", file=sys.stderr)
    finally:
        if args.out:
            out.close()

    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, restval="")
            writer.writeheader()
            for rec in records:
                writer.writerow(rec.to_dict())
    return EXIT_VERIFY if failed else EXIT_OK


def _cmd_compare(args) -> int:
    records = []
    try:
        for path in args.records:
            with open(path, encoding="utf-8") as fh:
                records.extend(RunMetrics.from_dict(json.loads(line)) for line in fh if line.strip())
        summary = compare_report(records)
    except (OSError, ValueError, TypeError) as exc:
        print(f"skipmatch compare: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(summary.to_dict(), indent=2))
    return EXIT_OK


def _cmd_convert(args) -> int:
    try:
        graph = load_edge_list(args.src, args.src_format)
        if args.dst_format == "binary":
            write_edge_list_binary(graph, args.dst)
        else:
            write_edge_list_text(graph, args.dst)
    except (OSError, GraphFormatError) as exc:
        print(f"skipmatch convert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s: %(message)s", stream=sys.stderr)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "compare":
        return _cmd_compare(args)
    return _cmd_convert(args)


def cli_main(argv: list[str] | None = None) -> int:
    """Like :func:`main` but returns argparse's exit status instead of raising."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
