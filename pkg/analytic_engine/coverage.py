"""
Coverage probabilities P(SINR > beta) for both link classes and both
allocation modes.

The general forms are integrals over the serving distance. Each is mapped
to a unit-rate exponential variable t before integration:

    D2D links:      t = v² / (2 delta²)        (Rayleigh link distance)
    cellular users: t = lambda_B pi r²         (nearest-BS distance)

With sigma² = 0 every integrand becomes exp(-(1 + c) t), so the general
forms reduce to the interference-limited closed forms 1 / (1 + c).
"""

import logging
import math
from functools import partial
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from analytic_engine.laplace import laplace_d2d_interference
from analytic_engine.quadrature import integrate_1d
from analytic_engine.special import h0, h1, kappa
from network_model.enums import AllocationMode, LinkClass
from network_model.load import effective_d2d_density, load_state
from network_model.models import CoverageCurve, LoadState, NetworkConfig
from network_model.parallel import parallel_map
from network_model.units import db_to_linear

logger = logging.getLogger("analytic_engine")

DEFAULT_BETA_DB = (-20.0, 40.0, 40)


def default_betas() -> Tuple[float, ...]:
    """40 thresholds evenly spaced in dB over [-20, 40]."""
    lo, hi, n = DEFAULT_BETA_DB
    return tuple(float(db_to_linear(x)) for x in np.linspace(lo, hi, n))


def _clip_probability(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def _d2d_density(cfg: NetworkConfig, load: Optional[LoadState]) -> float:
    return load.lambda_d_tilde if load is not None else effective_d2d_density(cfg)


def _require_bs(cfg: NetworkConfig) -> None:
    if cfg.lambda_b <= 0:
        raise ValueError("cellular coverage needs a positive BS density")


# ==========================================
# Dedicated network
# ==========================================

def coverage_d2d_dedicated(
    cfg: NetworkConfig,
    beta: float,
    load: Optional[LoadState] = None,
) -> float:
    """D2D link in the dedicated band: interference from other D2D links only."""
    if beta <= 0 or cfg.delta == 0:
        return 1.0

    lam = _d2d_density(cfg, load)
    two_delta_sq = 2.0 * cfg.delta ** 2
    noise_scale = beta * cfg.noise / cfg.p_d

    def integrand(t: float) -> float:
        v = math.sqrt(two_delta_sq * t)
        path = v ** cfg.alpha
        return math.exp(-t - noise_scale * path) * laplace_d2d_interference(
            beta * path / cfg.p_d, lam, cfg.p_d, cfg.alpha
        )

    result = integrate_1d(integrand, 0.0, math.inf, label="D2D coverage (dedicated)")
    return _clip_probability(result.value)


def coverage_d2d_dedicated_il(
    cfg: NetworkConfig,
    beta: float,
    load: Optional[LoadState] = None,
) -> float:
    """1 / (1 + 2 delta² lambda_D~ pi kappa beta^(2/alpha))."""
    if beta <= 0:
        return 1.0
    lam = _d2d_density(cfg, load)
    c = 2.0 * cfg.delta ** 2 * lam * math.pi * kappa(cfg.alpha) * beta ** (2.0 / cfg.alpha)
    return 1.0 / (1.0 + c)


def coverage_cellular_dedicated(
    cfg: NetworkConfig,
    beta: float,
    load: Optional[LoadState] = None,
) -> float:
    """Cellular user served by its nearest BS; interfering BSs thinned by rho."""
    if beta <= 0:
        return 1.0
    _require_bs(cfg)
    load = load or load_state(cfg, AllocationMode.DEDICATED, congested=False)

    interference = 2.0 * load.rho * h1(beta, cfg.alpha)
    noise_scale = beta * cfg.noise / cfg.p_b
    area = math.pi * cfg.lambda_b
    half_alpha = cfg.alpha / 2.0

    def integrand(t: float) -> float:
        return math.exp(-t * (1.0 + interference) - noise_scale * (t / area) ** half_alpha)

    result = integrate_1d(integrand, 0.0, math.inf, label="cellular coverage (dedicated)")
    return _clip_probability(result.value)


def coverage_cellular_dedicated_il(
    cfg: NetworkConfig,
    beta: float,
    load: Optional[LoadState] = None,
) -> float:
    """1 / (2 rho H_1(beta, alpha) + 1)."""
    if beta <= 0:
        return 1.0
    load = load or load_state(cfg, AllocationMode.DEDICATED, congested=False)
    return 1.0 / (2.0 * load.rho * h1(beta, cfg.alpha) + 1.0)


# ==========================================
# Shared network
# ==========================================

def coverage_d2d_shared(
    cfg: NetworkConfig,
    beta: float,
    load: Optional[LoadState] = None,
) -> float:
    """D2D link reusing the downlink band: D2D plus BS interference."""
    if beta <= 0 or cfg.delta == 0:
        return 1.0
    load = load or load_state(cfg, AllocationMode.SHARED, congested=False)

    two_delta_sq = 2.0 * cfg.delta ** 2
    noise_scale = beta * cfg.noise / cfg.p_d
    bs_term = 2.0 * math.pi * load.rho * cfg.lambda_b * h0(beta, cfg.alpha, cfg.p_d / cfg.p_b)

    def integrand(t: float) -> float:
        v_sq = two_delta_sq * t
        path = v_sq ** (cfg.alpha / 2.0)
        return math.exp(-t - bs_term * v_sq - noise_scale * path) * laplace_d2d_interference(
            beta * path / cfg.p_d, load.lambda_d_tilde, cfg.p_d, cfg.alpha
        )

    result = integrate_1d(integrand, 0.0, math.inf, label="D2D coverage (shared)")
    return _clip_probability(result.value)


def coverage_d2d_shared_il(
    cfg: NetworkConfig,
    beta: float,
    load: Optional[LoadState] = None,
) -> float:
    """1 / (2 delta² lambda_D~ kappa pi beta^(2/alpha) + 4 delta² pi rho lambda_B H_0 + 1)."""
    if beta <= 0:
        return 1.0
    load = load or load_state(cfg, AllocationMode.SHARED, congested=False)
    delta_sq = cfg.delta ** 2
    d2d = 2.0 * delta_sq * load.lambda_d_tilde * kappa(cfg.alpha) * math.pi * beta ** (2.0 / cfg.alpha)
    bs = 4.0 * delta_sq * math.pi * load.rho * cfg.lambda_b * h0(beta, cfg.alpha, cfg.p_d / cfg.p_b)
    return 1.0 / (d2d + bs + 1.0)


def coverage_cellular_shared(
    cfg: NetworkConfig,
    beta: float,
    load: Optional[LoadState] = None,
) -> float:
    """Cellular user sharing its band with D2D links."""
    if beta <= 0:
        return 1.0
    _require_bs(cfg)
    load = load or load_state(cfg, AllocationMode.SHARED, congested=False)

    interference = 2.0 * load.rho * h1(beta, cfg.alpha)
    noise_scale = beta * cfg.noise / cfg.p_b
    area = math.pi * cfg.lambda_b
    half_alpha = cfg.alpha / 2.0

    def integrand(t: float) -> float:
        path = (t / area) ** half_alpha
        return math.exp(-t * (1.0 + interference) - noise_scale * path) * laplace_d2d_interference(
            beta * path / cfg.p_b, load.lambda_d_tilde, cfg.p_d, cfg.alpha
        )

    result = integrate_1d(integrand, 0.0, math.inf, label="cellular coverage (shared)")
    return _clip_probability(result.value)


def coverage_cellular_shared_il(
    cfg: NetworkConfig,
    beta: float,
    load: Optional[LoadState] = None,
) -> float:
    """1 / ((lambda_D~/lambda_B) kappa (beta P_D/P_B)^(2/alpha) + 2 rho H_1 + 1)."""
    if beta <= 0:
        return 1.0
    _require_bs(cfg)
    load = load or load_state(cfg, AllocationMode.SHARED, congested=False)
    d2d = (
        load.lambda_d_tilde / cfg.lambda_b
        * kappa(cfg.alpha)
        * (beta * cfg.p_d / cfg.p_b) ** (2.0 / cfg.alpha)
    )
    return 1.0 / (d2d + 2.0 * load.rho * h1(beta, cfg.alpha) + 1.0)


# ==========================================
# Dispatch and curves
# ==========================================

CoverageFn = Callable[..., float]

COVERAGE_FUNCTIONS: Dict[Tuple[LinkClass, AllocationMode, bool], CoverageFn] = {
    (LinkClass.D2D, AllocationMode.DEDICATED, False): coverage_d2d_dedicated,
    (LinkClass.D2D, AllocationMode.DEDICATED, True): coverage_d2d_dedicated_il,
    (LinkClass.CELLULAR, AllocationMode.DEDICATED, False): coverage_cellular_dedicated,
    (LinkClass.CELLULAR, AllocationMode.DEDICATED, True): coverage_cellular_dedicated_il,
    (LinkClass.D2D, AllocationMode.SHARED, False): coverage_d2d_shared,
    (LinkClass.D2D, AllocationMode.SHARED, True): coverage_d2d_shared_il,
    (LinkClass.CELLULAR, AllocationMode.SHARED, False): coverage_cellular_shared,
    (LinkClass.CELLULAR, AllocationMode.SHARED, True): coverage_cellular_shared_il,
}


def coverage_function(
    cfg: NetworkConfig,
    link_class: LinkClass,
    mode: Optional[AllocationMode] = None,
    *,
    interference_limited: bool = False,
    load: Optional[LoadState] = None,
) -> Callable[[float], float]:
    """Bind cfg and load, returning beta -> P(SINR > beta)."""
    mode = mode or cfg.mode
    fn = COVERAGE_FUNCTIONS[(link_class, mode, interference_limited)]
    return partial(fn, cfg, load=load)


def coverage_curve(
    cfg: NetworkConfig,
    link_class: LinkClass,
    mode: Optional[AllocationMode] = None,
    betas: Optional[Sequence[float]] = None,
    *,
    interference_limited: bool = False,
    load: Optional[LoadState] = None,
    workers: Optional[int] = None,
) -> CoverageCurve:
    """
    Evaluate a coverage function on an ascending beta grid.

    Grid points are independent and may be evaluated in parallel; values are
    made non-increasing to absorb quadrature noise.
    """
    mode = mode or cfg.mode
    grid = tuple(float(b) for b in (betas if betas is not None else default_betas()))
    if any(b2 < b1 for b1, b2 in zip(grid, grid[1:])):
        raise ValueError("beta grid must be ascending")

    fn = coverage_function(
        cfg, link_class, mode, interference_limited=interference_limited, load=load
    )
    values = np.minimum.accumulate(np.array(parallel_map(fn, grid, workers), dtype=float))

    return CoverageCurve(
        link_class=link_class,
        mode=mode,
        betas=grid,
        ccdf=tuple(float(v) for v in values),
        interference_limited=interference_limited,
        function=fn,
    )
