"""Thread plumbing shared by the parallel kernels."""

from __future__ import annotations

import os
import threading
import time
from typing import Callable, Sequence

WORKERS_ENV = "SKIPPER_WORKERS"


def available_cpus() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # not on Linux
        return os.cpu_count() or 1


def default_workers() -> int:
    """``$SKIPPER_WORKERS`` if set, else the number of usable CPUs."""
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {env!r}") from None
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {env!r}")
        return n
    return available_cpus()


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        return default_workers()
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return int(workers)


def run_threads(tasks: Sequence[Callable[[], None]], timeout: float | None = None) -> float:
    """Run each task on its own daemon thread and wait for all of them.

    Returns elapsed wall time. The kernels release the GIL, so threads run
    truly concurrently. Daemon threads mean a wedged kernel cannot keep the
    interpreter alive after a :class:`TimeoutError`.
    """
    errors: list[BaseException] = []

    def wrap(fn):
        def body():
            try:
                fn()
            except BaseException as exc:  # surfaced in the caller
                errors.append(exc)
        return body

    threads = [threading.Thread(target=wrap(fn), daemon=True) for fn in tasks]
    t0 = time.perf_counter()
    for t in threads:
        t.start()
    deadline = None if timeout is None else t0 + timeout
    for t in threads:
        t.join(None if deadline is None else max(0.0, deadline - time.perf_counter()))
    elapsed = time.perf_counter() - t0
    if any(t.is_alive() for t in threads):
        raise TimeoutError(f"workers still running after {timeout:.1f} s")
    if errors:
        raise errors[0]
    return elapsed
