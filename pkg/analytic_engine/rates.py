"""
Average rates, their supremum lower bounds, and per-cell throughput.

Spectral efficiencies are combined with the resource prefactors:

    cellular UE      b_C * p_a * SE_C
    D2D type j       p_t * min{p_f * B_D2D, b_D} * SE_D + (b_D / w) * (1 - p_t) * p_a * SE_C

with B_D2D = theta*B (dedicated) or B (shared). The cellular-mode term is
the relayed traffic served like downlink traffic, at cost w per subband.
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from analytic_engine.coverage import coverage_function
from analytic_engine.quadrature import integrate_1d
from network_model.enums import AllocationMode, LinkClass
from network_model.errors import QuadratureError
from network_model.load import load_state
from network_model.models import (
    CoverageCurve,
    LoadState,
    NetworkConfig,
    RateLowerBounds,
    RateReport,
)

logger = logging.getLogger("analytic_engine")

LOG2_E = 1.0 / math.log(2.0)

# Threshold search range (log10 beta) and coarse scan size
LOG_BETA_RANGE = (-4.0, 4.0)
SCAN_POINTS = 64


# Rate integral truncation in u = ln(1 + beta): windows of RATE_WINDOW,
# stopping once the extrapolated tail is below RATE_TAIL_TOL of the total
RATE_WINDOW = 10.0
RATE_U_MAX = 230.0
RATE_TAIL_TOL = 1e-10


def _geometric_tail(previous: Optional[float], piece: float) -> Optional[float]:
    """Tail beyond the last window if window integrals keep shrinking by piece/previous."""
    if piece <= 0.0:
        return 0.0
    if not previous:
        return None
    ratio = piece / previous
    if ratio >= 1.0:
        return None
    return piece * ratio / (1.0 - ratio)


def rate_integral(curve: Union[CoverageCurve, Callable[[float], float]]) -> float:
    """
    E[log2(1 + SINR)] = integral of log2(e)/(1+beta) * P(beta) over (0, inf).

    With beta = e^u - 1 this is log2(e) times the integral of P(e^u - 1) du.
    The u axis is integrated window by window up to u = 230 (beta ~ 1e100).
    A CCDF decaying like beta^(-2/alpha) or faster gives geometrically
    shrinking window integrals, and their remaining sum closes the tail.
    """
    fn = curve.function if isinstance(curve, CoverageCurve) else curve
    if fn is None:
        raise ValueError("coverage curve carries no CCDF function")

    def integrand(u: float) -> float:
        return fn(math.expm1(u))

    total = 0.0
    previous: Optional[float] = None
    piece = 0.0
    lower = 0.0
    while lower < RATE_U_MAX:
        upper = min(lower + RATE_WINDOW, RATE_U_MAX)
        piece = integrate_1d(integrand, lower, upper, label="rate integral").value
        total += piece
        tail = _geometric_tail(previous, piece)
        if tail is not None and tail <= RATE_TAIL_TOL * total:
            return LOG2_E * (total + tail)
        previous, lower = piece, upper

    raise QuadratureError(
        "rate integral", LOG2_E * total, LOG2_E * piece, 0,
        f"CCDF has not decayed by beta = e^{RATE_U_MAX:g}; the rate is unbounded",
    )


def supremum_log_rate(fn: Callable[[float], float]) -> Tuple[float, float]:
    """
    Maximise log2(1+beta) * P(beta) over log10(beta) in [-4, 4].

    A 64-point scan brackets the best grid point; a bounded scalar search
    refines inside the bracket. Unimodality is not assumed.
    Returns (beta*, value).
    """
    def objective(log_beta: float) -> float:
        beta = 10.0 ** log_beta
        return math.log2(1.0 + beta) * fn(beta)

    grid = np.linspace(LOG_BETA_RANGE[0], LOG_BETA_RANGE[1], SCAN_POINTS)
    values = [objective(x) for x in grid]
    k = int(np.argmax(values))
    best_x, best_value = float(grid[k]), float(values[k])

    lo = float(grid[max(k - 1, 0)])
    hi = float(grid[min(k + 1, SCAN_POINTS - 1)])
    refined = minimize_scalar(
        lambda x: -objective(x),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-7},
    )
    if refined.success and -refined.fun > best_value:
        best_x, best_value = float(refined.x), float(-refined.fun)

    return 10.0 ** best_x, best_value


def assemble_rates(
    cfg: NetworkConfig,
    mode: AllocationMode,
    load: LoadState,
    efficiency_cellular: float,
    efficiency_d2d: float,
) -> Tuple[float, Tuple[float, ...]]:
    """Apply resource and admission prefactors to per-link spectral efficiencies."""
    rate_cellular = cfg.b_c * load.p_a * efficiency_cellular
    pool = cfg.b_d2d(mode)

    per_type: List[float] = []
    for t in cfg.d2d_types:
        direct = t.p_t * min(t.p_f * pool, t.b_d) * efficiency_d2d
        relayed = (t.b_d / cfg.w) * (1.0 - t.p_t) * load.p_a * efficiency_cellular
        per_type.append(direct + relayed)

    return rate_cellular, tuple(per_type)


def mixture(cfg: NetworkConfig, per_type: Sequence[float]) -> float:
    """Rate of a typical D2D link: per-type rates weighted by lambda_D_j / lambda_D."""
    total = cfg.lambda_d
    if total <= 0:
        return 0.0
    return math.fsum(t.lambda_d / total * r for t, r in zip(cfg.d2d_types, per_type))


def rate_lower_bounds(
    cfg: NetworkConfig,
    mode: Optional[AllocationMode] = None,
    *,
    interference_limited: bool = False,
    load: Optional[LoadState] = None,
    thresholds: Optional[Tuple[float, float]] = None,
) -> RateLowerBounds:
    """
    Lower bounds from log2(1+SINR) >= log2(1+beta) * 1{SINR > beta}.

    thresholds=(beta_C, beta_D) evaluates at fixed thresholds (a fixed MCS)
    instead of taking the supremum.
    """
    mode = mode or cfg.mode
    load = load or load_state(cfg, mode, congested=False)

    fn_c = coverage_function(
        cfg, LinkClass.CELLULAR, mode, interference_limited=interference_limited, load=load
    )
    fn_d = coverage_function(
        cfg, LinkClass.D2D, mode, interference_limited=interference_limited, load=load
    )

    if thresholds is None:
        beta_c, log_rate_c = supremum_log_rate(fn_c)
        beta_d, log_rate_d = supremum_log_rate(fn_d)
    else:
        beta_c, beta_d = thresholds
        log_rate_c = math.log2(1.0 + beta_c) * fn_c(beta_c)
        log_rate_d = math.log2(1.0 + beta_d) * fn_d(beta_d)

    lb_c, lb_d = assemble_rates(cfg, mode, load, log_rate_c, log_rate_d)
    return RateLowerBounds(
        lb_cellular=lb_c,
        lb_d2d_per_type=lb_d,
        beta_c_star=beta_c,
        beta_d_star=beta_d,
        log_rate_cellular=log_rate_c,
        log_rate_d2d=log_rate_d,
    )


def _rates(
    cfg: NetworkConfig,
    mode: AllocationMode,
    interference_limited: bool,
    load: Optional[LoadState],
) -> RateReport:
    load = load or load_state(cfg, mode, congested=False)

    se_c = rate_integral(coverage_function(
        cfg, LinkClass.CELLULAR, mode, interference_limited=interference_limited, load=load
    ))
    se_d = rate_integral(coverage_function(
        cfg, LinkClass.D2D, mode, interference_limited=interference_limited, load=load
    ))
    rate_c, rate_d = assemble_rates(cfg, mode, load, se_c, se_d)
    bounds = rate_lower_bounds(
        cfg, mode, interference_limited=interference_limited, load=load
    )

    return RateReport(
        mode=mode,
        rate_cellular=rate_c,
        rate_d2d_per_type=rate_d,
        rate_d2d_mixture=mixture(cfg, rate_d),
        lb_cellular=bounds.lb_cellular,
        lb_d2d_per_type=bounds.lb_d2d_per_type,
        lb_d2d_mixture=mixture(cfg, bounds.lb_d2d_per_type),
        beta_c_star=bounds.beta_c_star,
        beta_d_star=bounds.beta_d_star,
        spectral_efficiency_cellular=se_c,
        spectral_efficiency_d2d=se_d,
    )


def rates_dedicated(
    cfg: NetworkConfig,
    *,
    interference_limited: bool = False,
    load: Optional[LoadState] = None,
) -> RateReport:
    """Average rates with D2D links confined to the theta*B subbands."""
    return _rates(cfg, AllocationMode.DEDICATED, interference_limited, load)


def rates_shared(
    cfg: NetworkConfig,
    *,
    interference_limited: bool = False,
    load: Optional[LoadState] = None,
) -> RateReport:
    """Average rates with D2D links hopping over the whole downlink band."""
    return _rates(cfg, AllocationMode.SHARED, interference_limited, load)


def rates(cfg: NetworkConfig, mode: Optional[AllocationMode] = None, **kwargs) -> RateReport:
    mode = mode or cfg.mode
    if mode == AllocationMode.DEDICATED:
        return rates_dedicated(cfg, **kwargs)
    return rates_shared(cfg, **kwargs)


def per_cell_throughput_bps(cfg: NetworkConfig, report: RateReport) -> float:
    """Total rate of all links in an average cell, in bits/s."""
    density = cfg.lambda_u * report.rate_cellular + math.fsum(
        t.lambda_d * r for t, r in zip(cfg.d2d_types, report.rate_d2d_per_type)
    )
    return density / cfg.lambda_b * cfg.subband_bandwidth_hz


def compare_allocation_modes(cfg: NetworkConfig) -> dict:
    """
    Per-cell throughput of both modes at matched densities.

    The dedicated side keeps cfg's hopping parameters; the shared side caps
    p_f at b_D/B, the largest useful access probability when hopping over
    the whole band.
    """
    dedicated_cfg = cfg.with_mode(AllocationMode.DEDICATED)
    shared_cfg = cfg.with_mode(AllocationMode.SHARED).with_hopping(
        p_f=[min(t.p_f, t.b_d / cfg.b_total) for t in cfg.d2d_types]
    )
    dedicated = rates_dedicated(dedicated_cfg)
    shared = rates_shared(shared_cfg)
    return {
        "dedicated_bps": per_cell_throughput_bps(dedicated_cfg, dedicated),
        "shared_bps": per_cell_throughput_bps(shared_cfg, shared),
        "dedicated": dedicated,
        "shared": shared,
    }
