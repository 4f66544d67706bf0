"""Ordered parallel execution whose results never depend on the worker count."""
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def chunk_ranges(total: int, chunk_size: int) -> list[tuple[int, int]]:
    """Split ``[0, total)`` into ``[start, stop)`` blocks of ``chunk_size``."""
    return [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


def ordered_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> list[R]:
    """Apply ``fn`` to every item, returning results in input order."""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    results: list = [None] * len(items)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(fn, item): idx for idx, item in enumerate(items)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    logger.debug(f"Completed {len(items)} work items on {threads} threads")
    return results
