"""
Rate-density objective: expected total rate per m² of D2D links and
cellular users, built from the rate lower bounds.
"""

import math
from typing import Optional, Tuple

from analytic_engine.rates import rate_lower_bounds
from network_model.enums import AllocationMode, Utility
from network_model.load import load_state
from network_model.models import LoadState, NetworkConfig


def apply_utility(rate: float, utility: Utility) -> float:
    if utility == Utility.LOG_RATE:
        return math.log1p(rate)
    return rate


def rate_density(
    cfg: NetworkConfig,
    mode: Optional[AllocationMode] = None,
    *,
    thresholds: Optional[Tuple[float, float]] = None,
    utility: Utility = Utility.TOTAL_RATE,
    interference_limited: bool = True,
    load: Optional[LoadState] = None,
) -> float:
    """
    sum_j lambda_D_j * U(R_Dl_j) + lambda_U * U(R_Cl).

    The default load state decides congestion from the heavy-load test, so
    in heavy load rho = 1 and p_a is taken without the clamp.
    """
    mode = mode or cfg.mode
    load = load or load_state(cfg, mode)
    bounds = rate_lower_bounds(
        cfg,
        mode,
        interference_limited=interference_limited,
        load=load,
        thresholds=thresholds,
    )
    d2d = math.fsum(
        t.lambda_d * apply_utility(r, utility)
        for t, r in zip(cfg.d2d_types, bounds.lb_d2d_per_type)
    )
    return d2d + cfg.lambda_u * apply_utility(bounds.lb_cellular, utility)
