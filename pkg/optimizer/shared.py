"""
Hopping optimisation for the shared network.

Only the products x_j = p_t_j * p_f_j enter the objective, and x_j never
needs to exceed b_D_j / B. In heavy load with w >= 1, p_t* = 1 and the
search runs over p_f alone.
"""

import itertools
import logging
from typing import Optional

from network_model.enums import AllocationMode, SearchMethod
from network_model.load import is_heavily_loaded
from network_model.models import NetworkConfig, PartitionSolution
from network_model.parallel import check_grid_cost, parallel_map
from optimizer.hopping import beats, probability_axis
from optimizer.objective import rate_density

logger = logging.getLogger("optimizer")

# p_t resolution when the time-hopping probabilities must be searched too
TIME_STEP = 0.1


def optimize_shared(
    cfg: NetworkConfig,
    grid_resolution: float = 0.01,
    *,
    allow_expensive: bool = False,
    workers: Optional[int] = None,
) -> PartitionSolution:
    """
    Grid search of the shared-mode rate density.

    Each p_f_j ranges over [0, b_D_j / B] at grid_resolution, with the cap
    itself always included. Outside heavy load or for w < 1 the p_t vector
    is searched as well (TIME_STEP grid, walked from 1 downwards) and the
    result is flagged as a full grid search.
    """
    cfg = cfg.with_mode(AllocationMode.SHARED)
    heavy = is_heavily_loaded(cfg)
    reduced = heavy and cfg.w >= 1
    if not reduced:
        logger.warning(
            "Shared-mode reduction needs heavy load and w >= 1; searching p_t as well"
        )

    p_f_axes = [
        probability_axis(min(1.0, t.b_d / cfg.b_total), grid_resolution) for t in cfg.d2d_types
    ]
    p_t_axes = [
        [1.0] if reduced else probability_axis(1.0, TIME_STEP)[::-1] for _ in cfg.d2d_types
    ]

    points = 1
    for axis in p_f_axes + p_t_axes:
        points *= len(axis)
    check_grid_cost(points, allow_expensive, "shared-mode search")

    grid = [
        (p_t, p_f)
        for p_t in itertools.product(*p_t_axes)
        for p_f in itertools.product(*p_f_axes)
    ]

    def evaluate(point) -> float:
        p_t, p_f = point
        return rate_density(cfg.with_hopping(p_t=list(p_t), p_f=list(p_f)))

    values = parallel_map(evaluate, grid, workers)

    best_index, best_value = 0, None
    for k, value in enumerate(values):
        if beats(value, best_value):
            best_index, best_value = k, value
    p_t_star, p_f_star = grid[best_index]

    return PartitionSolution(
        p_t_star=tuple(float(x) for x in p_t_star),
        p_f_star=tuple(float(x) for x in p_f_star),
        theta_star=None,
        objective=best_value,
        method=SearchMethod.REDUCED_GRID if reduced else SearchMethod.FULL_GRID,
        heavily_loaded=heavy,
    )
