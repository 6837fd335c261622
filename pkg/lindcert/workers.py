"""Thread-pool fan-out for independent numerical tasks."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from lindcert.config import LindcertConfig

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(
    func: Callable[[T], R],
    items: Sequence[T],
    threads: int | None = None,
) -> list[R]:
    """Apply ``func`` to every item, preserving input order in the result.

    ``threads`` defaults to ``LindcertConfig.from_env().threads``; a single thread (or a single
    item) runs inline without a pool.
    """
    workers = LindcertConfig.from_env().threads if threads is None else max(1, threads)
    if workers == 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))
