"""Small shared helpers: bounded parallel map honouring LAMBDAFORGE_THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    """LAMBDAFORGE_THREADS: 0 = auto, 1 = serial, n = at most n workers."""
    raw = os.environ.get("LAMBDAFORGE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"LAMBDAFORGE_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise ValueError("LAMBDAFORGE_THREADS must be >= 0")
    if n == 0:
        return os.cpu_count() or 1
    return n


def pmap(fn, items, threads=None):
    """Order-preserving map, optionally on a bounded thread pool.

    Results are joined in input order, so output is deterministic regardless
    of scheduling.
    """
    items = list(items)
    if threads is None:
        threads = thread_count()
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))
