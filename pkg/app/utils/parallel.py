"""Order-preserving map over a process pool."""
from concurrent.futures import ProcessPoolExecutor
import logging
import os
from typing import Callable, Iterable, Optional, TypeVar

from app.core.config import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: Optional[int]) -> int:
    if workers is None:
        workers = get_settings().DEFAULT_WORKERS
    if workers is None:
        workers = os.cpu_count() or 1
    return max(1, int(workers))


def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None, chunksize: int = 256) -> list[R]:
    """
    map(func, items) with results in input order regardless of worker count.
    `func` must be a module-level callable so it can be pickled.
    """
    workers = resolve_workers(workers)
    items = list(items)
    if workers == 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug(f"Dispatching {len(items)} items to {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunksize))
