"""Replica-parallel execution with worker-count-independent results.

Replicas are pure functions of (master stream, replica index), so the merge
is a plain ordered collect: output is bit-identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def run_replicas(fn, n_replicas: int, workers: int = 1) -> list:
    """Evaluate fn(0..n_replicas-1), in replica order."""
    if n_replicas < 1:
        return []
    if workers <= 1:
        return [fn(i) for i in range(n_replicas)]
    chunk = max(1, n_replicas // (workers * 16))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_replicas), chunksize=chunk))
