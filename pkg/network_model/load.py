"""
Expected-load quantities: thinned D2D density, normal-RB fraction rho and
admission probability p_a.

rho uses the mean cell area 1/lambda_B while p_a uses the area of the cell
containing a typical user, 9/(7 lambda_B). Both are kept as written.
"""

import math
from typing import Optional

from network_model.enums import AllocationMode
from network_model.errors import NoCellularSpectrumError
from network_model.models import LoadState, NetworkConfig


def effective_d2d_density(cfg: NetworkConfig) -> float:
    """Density of D2D transmitters active on a given subband, sum of p_t*p_f*lambda_d."""
    return math.fsum(t.p_t * t.p_f * t.lambda_d for t in cfg.d2d_types)


def offered_cellular_load(cfg: NetworkConfig) -> float:
    """Subband demand per m² served by BSs: cellular UEs plus cellular-mode D2D traffic."""
    relayed = math.fsum((1.0 - t.p_t) * t.b_d * t.lambda_d for t in cfg.d2d_types)
    return cfg.b_c * cfg.lambda_u + relayed


def _cellular_pool(cfg: NetworkConfig, mode: Optional[AllocationMode]) -> float:
    b_cellular = cfg.b_cellular(mode)
    if b_cellular <= 0:
        raise NoCellularSpectrumError(
            "no cellular spectrum: theta = 1 leaves B_C = 0 in dedicated mode"
        )
    return b_cellular


def normal_rb_fraction(cfg: NetworkConfig, mode: Optional[AllocationMode] = None) -> float:
    """
    Fraction of resource blocks on which a BS transmits.

    rho = min{ offered load / (lambda_B * B_C), 1 }
    """
    b_cellular = _cellular_pool(cfg, mode)
    load = offered_cellular_load(cfg)
    if load <= 0:
        return 0.0
    if cfg.lambda_b <= 0:
        return 1.0
    return min(load / (cfg.lambda_b * b_cellular), 1.0)


def admission_probability(cfg: NetworkConfig, mode: Optional[AllocationMode] = None) -> float:
    """
    Fraction of its demand a cellular-side user is granted.

    p_a = min{ 7 B_C lambda_B / (9 * offered load), 1 }, and 1 for an empty cell.
    """
    b_cellular = _cellular_pool(cfg, mode)
    load = offered_cellular_load(cfg)
    if load <= 0:
        return 1.0
    return min(7.0 * b_cellular * cfg.lambda_b / (9.0 * load), 1.0)


def is_heavily_loaded(cfg: NetworkConfig, mode: Optional[AllocationMode] = None) -> bool:
    """7 B_C lambda_B < 9 b_C lambda_U: cellular UEs alone saturate a typical cell."""
    return 7.0 * cfg.b_cellular(mode) * cfg.lambda_b < 9.0 * cfg.b_c * cfg.lambda_u


def load_state(
    cfg: NetworkConfig,
    mode: Optional[AllocationMode] = None,
    congested: Optional[bool] = None,
) -> LoadState:
    """
    Bundle the load quantities of one mode.

    congested=None decides from is_heavily_loaded. In the congested state
    every BS is busy (rho = 1) and p_a is taken without the clamp; that form
    is finite at B_C = 0, where it gives p_a = 0.
    """
    mode = mode or cfg.mode
    if congested is None:
        congested = is_heavily_loaded(cfg, mode)

    lambda_d_tilde = effective_d2d_density(cfg)
    b_cellular = cfg.b_cellular(mode)

    if congested:
        load = offered_cellular_load(cfg)
        p_a = 7.0 * b_cellular * cfg.lambda_b / (9.0 * load) if load > 0 else 1.0
        return LoadState(
            rho=1.0,
            p_a=p_a,
            lambda_d_tilde=lambda_d_tilde,
            b_cellular=b_cellular,
            congested=True,
        )

    return LoadState(
        rho=normal_rb_fraction(cfg, mode),
        p_a=admission_probability(cfg, mode),
        lambda_d_tilde=lambda_d_tilde,
        b_cellular=b_cellular,
        congested=False,
    )
