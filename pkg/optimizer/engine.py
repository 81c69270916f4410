import logging
from typing import Optional

from network_model.enums import AllocationMode
from network_model.load import is_heavily_loaded
from network_model.models import NetworkConfig, PartitionSolution
from optimizer.hopping import optimal_time_hopping
from optimizer.partition import full_grid_theta, optimal_theta
from optimizer.shared import optimize_shared

logger = logging.getLogger("optimizer")


def _closed_form_applies(cfg: NetworkConfig, mode: AllocationMode) -> bool:
    at_zero = cfg.replace(theta=0.0) if mode == AllocationMode.DEDICATED else cfg
    return cfg.mode == mode and cfg.w >= 1 and is_heavily_loaded(at_zero, mode)


def solve_dedicated_closed_form(cfg: NetworkConfig) -> Optional[PartitionSolution]:
    """p_t* = 1, p_f* = min{1, b_D/(theta B)}, theta* from the interval candidates."""
    if not _closed_form_applies(cfg, AllocationMode.DEDICATED):
        return None
    return optimal_theta(cfg)


def solve_shared_reduced_grid(cfg: NetworkConfig) -> Optional[PartitionSolution]:
    """p_t* = 1 and a grid over p_f_j <= b_D_j / B."""
    if not _closed_form_applies(cfg, AllocationMode.SHARED):
        return None
    return optimize_shared(cfg)


def solve_full_grid(cfg: NetworkConfig) -> PartitionSolution:
    """
    Fallback outside the heavy-load, w >= 1 regime.

    Dedicated: p_t* by grid search at cfg's theta, then theta by a grid with
    those p_t. Shared: joint grid over p_t and p_f.
    """
    if cfg.mode == AllocationMode.SHARED:
        return optimize_shared(cfg)
    hopping = optimal_time_hopping(cfg)
    return full_grid_theta(cfg.with_hopping(p_t=list(hopping.p_t_star)), step=0.01)


# Solver evaluation order (priority-based)
SOLVERS = [
    # Tier 1: closed form, proven regime
    solve_dedicated_closed_form,
    # Tier 2: reduced search, proven regime
    solve_shared_reduced_grid,
]


def solve(cfg: NetworkConfig) -> PartitionSolution:
    """
    Optimise hopping probabilities (and theta in dedicated mode).

    Solvers are tried in priority order and the first that applies wins.
    A failing solver is logged and skipped; the full grid search always
    produces a solution.
    """
    for solver in SOLVERS:
        try:
            solution = solver(cfg)
            if solution:
                return solution
        except Exception as e:
            logger.error("Error in solver %s: %s", solver.__name__, e)
            continue

    return solve_full_grid(cfg)


def _summary(solution: PartitionSolution) -> dict:
    return {
        "method": solution.method.value,
        "p_t_star": list(solution.p_t_star),
        "p_f_star": list(solution.p_f_star),
        "theta_star": solution.theta_star,
        "objective": solution.objective,
    }


def get_solver_diagnostics(cfg: NetworkConfig) -> dict:
    """
    Shows which solvers apply to a configuration and what each returns.

    The fallback is only run when no solver applies.
    """
    diagnostics = {
        "scenario_summary": {
            "mode": cfg.mode.value,
            "num_types": cfg.num_types,
            "w": cfg.w,
            "heavily_loaded": is_heavily_loaded(
                cfg.replace(theta=0.0) if cfg.mode == AllocationMode.DEDICATED else cfg
            ),
        },
        "solver_evaluations": [],
    }

    matched = False
    for solver in SOLVERS:
        try:
            solution = solver(cfg)
            matched = matched or solution is not None
            diagnostics["solver_evaluations"].append({
                "solver": solver.__name__,
                "matched": solution is not None,
                "solution": _summary(solution) if solution else None,
            })
        except Exception as e:
            diagnostics["solver_evaluations"].append({
                "solver": solver.__name__,
                "matched": False,
                "error": str(e),
            })

    diagnostics["fallback"] = None if matched else _summary(solve_full_grid(cfg))
    return diagnostics
