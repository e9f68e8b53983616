"""
Realization work queue.

Work items are independent echo realizations. They run inline for one
worker or on a process pool otherwise; results always come back in
submission order so reductions do not depend on the worker count.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor

logger = logging.getLogger(__name__)


def resolve_workers(workers):
    """Clamp a requested worker count to [1, cpu_count]."""
    if workers is None or workers < 1:
        return 1
    return min(int(workers), os.cpu_count() or 1)


def map_realizations(func, items, workers=1):
    """
    Run `func` over `items` and return results in item order.

    Args:
        func: module-level callable (must be picklable for workers > 1)
        items (list): work items
        workers (int): requested worker processes

    Returns:
        list: func(item) for each item, in order
    """
    items = list(items)
    workers = min(resolve_workers(workers), max(len(items), 1))

    if workers == 1:
        logger.debug(f"Running {len(items)} work items inline")
        return [func(item) for item in items]

    chunksize = max(1, len(items) // (4 * workers))
    logger.info(f"Dispatching {len(items)} work items to {workers} workers (chunksize={chunksize})")
    try:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(func, items, chunksize=chunksize))
    except Exception as e:
        logger.error(f"Worker pool failed: {e}")
        raise
