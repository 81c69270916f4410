"""
One-parameter sweeps. Each grid point yields one row; rows come back in
grid order whatever the completion order of the workers.
"""

import logging
import re
from dataclasses import replace
from typing import List, Optional, Sequence

from analytic_engine.rates import per_cell_throughput_bps, rates
from controller.response_builder import config_columns
from network_model.enums import AllocationMode
from network_model.models import NetworkConfig
from network_model.parallel import parallel_map
from network_model.units import mean_distance_to_delta
from optimizer.hopping import optimal_frequency_hopping, optimal_time_hopping
from optimizer.objective import rate_density

logger = logging.getLogger("controller")

SWEEP_VARIABLES = ("lambda_u", "p_t", "p_f", "p_t.<i>", "p_f.<i>", "theta", "w", "delta_mean")

_PER_TYPE = re.compile(r"^(p_t|p_f)\.(\d+)$")


def is_sweep_variable(var: str, num_types: int) -> bool:
    match = _PER_TYPE.match(var)
    if match:
        return 1 <= int(match.group(2)) <= num_types
    return var in SWEEP_VARIABLES


def _set_probability(cfg: NetworkConfig, name: str, value: float, index: Optional[int]) -> NetworkConfig:
    current = [getattr(t, name) for t in cfg.d2d_types]
    if index is None:
        current = [value] * cfg.num_types
    else:
        current[index] = value
    return cfg.with_hopping(**{name: current})


def apply_sweep_value(cfg: NetworkConfig, var: str, value: float) -> NetworkConfig:
    """
    Configuration at one sweep point.

    lambda_u is given in users per cell (1/lambda_B); D2D densities follow
    so that lambda_D / lambda_U keeps its scenario value. theta in dedicated
    mode substitutes p_f* = min{1, b_D/(theta B)}. delta_mean is the mean
    D2D link distance in meters.
    """
    match = _PER_TYPE.match(var)
    if match:
        return _set_probability(cfg, match.group(1), value, int(match.group(2)) - 1)
    if var in ("p_t", "p_f"):
        return _set_probability(cfg, var, value, None)

    if var == "lambda_u":
        lambda_u = value * cfg.lambda_b
        scale = lambda_u / cfg.lambda_u if cfg.lambda_u > 0 else 0.0
        types = tuple(replace(t, lambda_d=t.lambda_d * scale) for t in cfg.d2d_types)
        return cfg.replace(lambda_u=lambda_u, d2d_types=types)
    if var == "theta":
        at_theta = cfg.replace(theta=value)
        if cfg.mode == AllocationMode.DEDICATED:
            at_theta = at_theta.with_hopping(p_f=list(optimal_frequency_hopping(at_theta)))
        return at_theta
    if var == "w":
        return cfg.replace(w=value)
    if var == "delta_mean":
        return cfg.replace(delta=mean_distance_to_delta(value))

    raise ValueError(f"unknown sweep variable '{var}'")


def _rate_columns(cfg: NetworkConfig, mode: AllocationMode) -> dict:
    report = rates(cfg, mode)
    row = {
        "rate_cellular": report.rate_cellular,
        "rate_d2d": report.rate_d2d_mixture,
        "lb_cellular": report.lb_cellular,
        "lb_d2d": report.lb_d2d_mixture,
        "throughput_per_cell_bps": per_cell_throughput_bps(cfg, report),
    }
    for i, r in enumerate(report.rate_d2d_per_type, start=1):
        row[f"rate_d2d_{i}"] = r
    return row


def _mode_selection_columns(cfg: NetworkConfig, mode: AllocationMode) -> dict:
    solution = optimal_time_hopping(cfg, mode)
    row = {"method": solution.method.value, "objective": solution.objective}
    for i, p in enumerate(solution.p_t_star, start=1):
        row[f"p_t_star_{i}"] = p
    row["d2d_mode_links_per_cell"] = sum(
        p * t.lambda_d for p, t in zip(solution.p_t_star, cfg.d2d_types)
    ) / cfg.lambda_b
    return row


def evaluate_sweep_point(
    cfg: NetworkConfig,
    var: str,
    value: float,
    mode: Optional[AllocationMode] = None,
) -> dict:
    mode = mode or cfg.mode
    point = apply_sweep_value(cfg.with_mode(mode), var, value)
    row = {**config_columns(point), "sweep_var": var, "sweep_value": value}

    if var == "w":
        row.update(_mode_selection_columns(point, mode))
        return row

    row["objective"] = rate_density(point, mode)
    if var == "theta":
        return row
    row.update(_rate_columns(point, mode))
    return row


def run_sweep(
    cfg: NetworkConfig,
    var: str,
    grid: Sequence[float],
    mode: Optional[AllocationMode] = None,
    workers: Optional[int] = None,
) -> List[dict]:
    logger.info("Sweeping %s over %d points", var, len(grid))
    return parallel_map(lambda v: evaluate_sweep_point(cfg, var, v, mode), grid, workers)
