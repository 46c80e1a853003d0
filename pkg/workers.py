"""
Thread fan-out for grid sweeps and sample chunks
"""

import asyncio
from typing import Callable, List, Sequence, TypeVar

import settings
from logging_config import get_main_logger

logger = get_main_logger()

T = TypeVar("T")
R = TypeVar("R")


async def _gather(func: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    semaphore = asyncio.Semaphore(threads)

    async def run_one(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(func, item)

    results = await asyncio.gather(*(run_one(item) for item in items), return_exceptions=True)

    failures = [result for result in results if isinstance(result, BaseException)]
    if failures:
        logger.error(f"{len(failures)} of {len(items)} work items failed, first: {failures[0]}")
        raise failures[0]
    return list(results)


def run_parallel(func: Callable[[T], R], items: Sequence[T], threads: int = None) -> List[R]:
    """
    Apply func to every item, results in item order.

    One thread runs inline; more threads go through asyncio.to_thread under a
    semaphore. Callers merge results themselves, so the outcome does not
    depend on the thread count.
    """
    threads = threads or settings.DEFAULT_THREADS
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug(f"Dispatching {len(items)} work items over {threads} threads")
    return asyncio.run(_gather(func, items, threads))
