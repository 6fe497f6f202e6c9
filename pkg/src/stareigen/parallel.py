"""Rank-range partitioning and a small thread-pool map.

Scans over Sym_n are split into disjoint, contiguous rank ranges.  Results are
always merged in range order, so the output never depends on the number of
workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "STAREIGEN_THREADS"


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(1, count)


def rank_ranges(total: int, parts: int) -> list[tuple[int, int]]:
    """Split ``range(total)`` into at most `parts` contiguous half-open ranges."""
    if total < 0 or parts < 1:
        raise ValueError("total must be >= 0 and parts >= 1")
    parts = min(parts, total) or 1
    step, extra = divmod(total, parts)
    ranges = []
    start = 0
    for k in range(parts):
        stop = start + step + (1 if k < extra else 0)
        ranges.append((start, stop))
        start = stop
    return ranges


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """``[fn(x) for x in items]``, optionally on a thread pool; order is preserved."""
    items = list(items)
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
