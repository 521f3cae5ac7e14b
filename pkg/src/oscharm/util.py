"""Small shared runtime helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["worker_count", "parallel_map", "format_float"]


def worker_count() -> int:
    """Worker cap: OSCHARM_THREADS if set, else min(4, cpu count)."""
    env = os.environ.get("OSCHARM_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValueError(f"OSCHARM_THREADS must be an integer, got {env!r}") from exc
        return max(1, n)
    return max(1, min(4, os.cpu_count() or 1))


def parallel_map(fn, items):
    """Order-preserving map over a thread pool capped by worker_count()."""
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def format_float(x: float) -> str:
    """Round-trippable decimal rendering (17 significant digits)."""
    return format(float(x), ".17g")
