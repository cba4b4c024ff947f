"""
Thread-count configuration and an order-preserving map used by the per-pair solves
and the samplers.
"""

import logging
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

logger = logging.getLogger(__name__)

THREADS_ENV = "EIGENDIST_THREADS"

T = TypeVar('T')
R = TypeVar('R')


def worker_count(requested: Optional[int] = None) -> int:
    """
    Resolve the number of worker threads.

    An explicit request wins; otherwise EIGENDIST_THREADS is read, defaulting to 1.
    """
    if requested is not None:
        return max(1, int(requested))
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        warnings.warn(f"Ignoring non-integer {THREADS_ENV}={raw!r}", RuntimeWarning)
        return 1


def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """Apply func to every item, possibly concurrently; results keep the input order."""
    items = list(items)
    count = worker_count(workers)
    if count == 1 or len(items) < 2:
        return [func(item) for item in items]
    logger.debug("Dispatching %d tasks to %d threads", len(items), count)
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(func, items))
