"""
Worker-pool helpers.

The numerical loops (outer quadrature nodes, (n, s) sweeps, Monte Carlo
partitions) are independent; these helpers fan them out and return
results in input order.
"""

import logging
import os
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Type, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def default_workers() -> int:
    """Physical core count, falling back to logical cores."""
    try:
        import psutil

        count = psutil.cpu_count(logical=False)
    except ImportError:
        count = None
    if not count:
        count = os.cpu_count() or 1
    return max(1, int(count))


def parallel_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    workers: Optional[int] = None,
    processes: bool = False,
) -> List[R]:
    """Map fn over items, preserving order.

    workers=1 runs inline, which keeps tracebacks simple and is what the
    tests use by default.
    """
    items = list(items)
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    pool_cls: Type[Executor] = ProcessPoolExecutor if processes else ThreadPoolExecutor
    logger.debug("mapping %d items over %d %s", len(items), workers, pool_cls.__name__)
    with pool_cls(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
