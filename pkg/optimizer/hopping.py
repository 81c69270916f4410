"""
Optimal time- and frequency-hopping probabilities.
"""

import itertools
import logging
from typing import Optional, Tuple

import numpy as np

from network_model.enums import AllocationMode, SearchMethod
from network_model.load import is_heavily_loaded
from network_model.models import NetworkConfig, PartitionSolution
from network_model.parallel import check_grid_cost, parallel_map
from optimizer.objective import rate_density

logger = logging.getLogger("optimizer")

# Relative margin a grid point must beat the incumbent by
TIE_EPSILON = 1e-12


def optimal_frequency_hopping(cfg: NetworkConfig) -> Tuple[float, ...]:
    """
    p_f* = min{1, b_D / (theta B)} per type, for any non-decreasing utility.

    Each link spreads its demand over exactly b_D subbands of the D2D pool.
    """
    pool = cfg.theta * cfg.b_total
    if pool <= 0:
        logger.warning("theta = 0 leaves no D2D spectrum; p_f* set to zero")
        return tuple(0.0 for _ in cfg.d2d_types)
    return tuple(min(1.0, t.b_d / pool) for t in cfg.d2d_types)


def beats(value: float, best: Optional[float]) -> bool:
    """Strict improvement with a relative tolerance; earlier candidates win ties."""
    if best is None:
        return True
    return value > best + TIE_EPSILON * max(1.0, abs(best))


def probability_axis(upper: float, step: float) -> np.ndarray:
    """Grid 0, step, 2*step, ... up to and including `upper`."""
    if step <= 0:
        raise ValueError(f"grid step must be positive, got {step}")
    n = int(np.floor(upper / step + 1e-9))
    axis = np.round(np.arange(n + 1) * step, 12)
    if upper - axis[-1] > 1e-12:
        axis = np.append(axis, upper)
    return axis


def optimal_time_hopping(
    cfg: NetworkConfig,
    mode: Optional[AllocationMode] = None,
    *,
    step: float = 0.05,
    workers: Optional[int] = None,
    allow_expensive: bool = False,
) -> PartitionSolution:
    """
    Time-hopping probabilities maximising the rate density.

    In heavy load with w >= 1 every potential link should stay in D2D mode,
    so p_t* = 1 without a search. Otherwise p_t is searched on a product
    grid, walked from p_t = 1 downwards so ties go to D2D mode; a search
    outside heavy load is reported as a full grid search. Hopping
    probabilities p_f are taken from cfg.
    """
    mode = mode or cfg.mode
    if cfg.w <= 0:
        raise ValueError(f"cellular-mode cost w must be positive, got {cfg.w}")

    heavy = is_heavily_loaded(cfg, mode)
    p_f = tuple(t.p_f for t in cfg.d2d_types)

    if heavy and cfg.w >= 1:
        ones = tuple(1.0 for _ in cfg.d2d_types)
        return PartitionSolution(
            p_t_star=ones,
            p_f_star=p_f,
            theta_star=cfg.theta if mode == AllocationMode.DEDICATED else None,
            objective=rate_density(cfg.with_hopping(p_t=1.0), mode),
            method=SearchMethod.CLOSED_FORM,
            heavily_loaded=True,
        )

    if not heavy:
        logger.warning("Not heavily loaded; p_t* resolved by full grid search")

    axis = probability_axis(1.0, step)[::-1]
    points = len(axis) ** cfg.num_types
    check_grid_cost(points, allow_expensive, "time-hopping search")

    grid = list(itertools.product(axis, repeat=cfg.num_types))
    values = parallel_map(
        lambda p_t: rate_density(cfg.with_hopping(p_t=list(p_t)), mode), grid, workers
    )

    best_index, best_value = 0, None
    for k, value in enumerate(values):
        if beats(value, best_value):
            best_index, best_value = k, value

    return PartitionSolution(
        p_t_star=tuple(float(x) for x in grid[best_index]),
        p_f_star=p_f,
        theta_star=cfg.theta if mode == AllocationMode.DEDICATED else None,
        objective=best_value,
        method=SearchMethod.REDUCED_GRID if heavy else SearchMethod.FULL_GRID,
        heavily_loaded=heavy,
    )
