from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """Apply ``fn`` to every item; results keep the input order."""
    work = list(items)
    if threads <= 1 or len(work) <= 1:
        return [fn(item) for item in work]
    logger.debug("Fan-out | items=%s | threads=%s", len(work), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, work))


__all__ = ["parallel_map"]
