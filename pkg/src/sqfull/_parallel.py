"""Ordered parallel map used by the range scans.

Work units are independent and results come back in submission order, so
merged output never depends on the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_THREADS = "SQFULL_THREADS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(ENV_THREADS, "1")))
    except ValueError:
        return 1


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    items = list(items)
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def split_range(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Split the closed range [lo, hi] into at most `parts` contiguous pieces."""
    if hi < lo:
        return []
    parts = max(1, min(parts, hi - lo + 1))
    step, extra = divmod(hi - lo + 1, parts)
    out, start = [], lo
    for i in range(parts):
        stop = start + step + (1 if i < extra else 0) - 1
        out.append((start, stop))
        start = stop + 1
    return out
