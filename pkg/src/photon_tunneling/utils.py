"""Utility functions for running independent sweep points concurrently."""

import asyncio
import logging
from typing import Callable, Iterable, List, TypeVar

logger = logging.getLogger("photon_tunneling.utils")

T = TypeVar("T")
R = TypeVar("R")


async def gather_in_order(func: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Evaluate func on every item in worker threads.

    Args:
        func: Pure function of one sweep point
        items: Sweep points

    Returns:
        Results in the order of items, independent of completion order
    """
    items = list(items)
    logger.debug(f"Dispatching {len(items)} sweep points to worker threads")
    return list(await asyncio.gather(*(asyncio.to_thread(func, item) for item in items)))
