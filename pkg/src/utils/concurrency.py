"""Bounded, order-preserving parallel map over a thread pool."""

from typing import Callable, Iterable, List, TypeVar
from concurrent.futures import ThreadPoolExecutor

T = TypeVar("T")
R = TypeVar("R")


def bounded_map(fn: Callable[[T], R], items: Iterable[T], parallelism: int = 1) -> List[R]:
    """
    Apply ``fn`` to every item with at most ``parallelism`` calls in flight.

    Results keep input order. The first failure (in input order) is raised
    once all submitted work has finished.

    Args:
        fn: Function to apply
        items: Inputs
        parallelism: Maximum concurrent calls

    Returns:
        List of results
    """
    work = list(items)
    if parallelism <= 1 or len(work) <= 1:
        return [fn(item) for item in work]

    with ThreadPoolExecutor(max_workers=min(parallelism, len(work))) as pool:
        futures = [pool.submit(fn, item) for item in work]
    # the executor context waits for completion
    return [future.result() for future in futures]
