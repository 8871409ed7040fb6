from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

__all__ = ("ordered_map",)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """Apply ``fn`` to every item; results always come back in input order."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(fn, items))
