import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from dotenv import load_dotenv

from network_model.errors import CostGuardError

load_dotenv()

T = TypeVar("T")
R = TypeVar("R")


def worker_count(override: Optional[int] = None) -> int:
    """Worker threads: explicit override, else D2D_WORKERS, else 1."""
    if override is not None:
        return max(1, int(override))
    try:
        return max(1, int(os.getenv("D2D_WORKERS", 1)))
    except ValueError:
        return 1


def parallel_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    workers: Optional[int] = None,
) -> List[R]:
    """
    Map fn over items, returning results in input order.

    Runs inline with one worker, so results never depend on the pool size.
    """
    items = list(items)
    n = worker_count(workers)
    if n == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# Budget for exhaustive grid searches
MAX_GRID_POINTS = int(os.getenv("D2D_MAX_GRID_POINTS", 200000))


def check_grid_cost(points: int, allow_expensive: bool = False, label: str = "grid search") -> None:
    """Refuse grids above MAX_GRID_POINTS unless explicitly allowed."""
    if points > MAX_GRID_POINTS and not allow_expensive:
        raise CostGuardError(
            f"{label} needs {points} evaluations (limit {MAX_GRID_POINTS}); "
            "pass allow_expensive=True or raise D2D_MAX_GRID_POINTS"
        )
