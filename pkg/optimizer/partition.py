"""
Spectrum partition theta for the dedicated network.

With p_t = 1, p_f = min{1, b_D/(theta B)} and fixed thresholds, the
interference-limited rate density on each interval between consecutive
normalised demands b~ = b_D/B is

    theta (A + E theta) / (F theta + C) + D (1 - theta)

which is concave in theta. Each interval contributes one candidate: its
stationary point clamped to the interval, or its right endpoint when the
D2D slope E/F already beats the cellular slope D.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from analytic_engine.coverage import coverage_cellular_dedicated_il
from analytic_engine.rates import rate_lower_bounds
from analytic_engine.special import kappa
from network_model.enums import AllocationMode, SearchMethod
from network_model.load import is_heavily_loaded, load_state
from network_model.models import (
    NetworkConfig,
    PartitionSolution,
    ThetaCandidate,
    ThetaPartitionCoeffs,
    ThetaRegion,
)
from network_model.parallel import parallel_map
from optimizer.hopping import beats, optimal_frequency_hopping
from optimizer.objective import rate_density

logger = logging.getLogger("optimizer")


def _at_theta(cfg: NetworkConfig, theta: float) -> NetworkConfig:
    """cfg in dedicated mode at theta with p_f* substituted; p_t is kept."""
    trial = cfg.replace(theta=float(theta), mode=AllocationMode.DEDICATED)
    return trial.with_hopping(p_f=list(optimal_frequency_hopping(trial)))


def incumbent_thresholds(cfg: NetworkConfig) -> Tuple[float, float]:
    """
    (beta_C, beta_D) maximising the interference-limited rate bounds at the
    incumbent configuration: p_t = 1 and p_f* at cfg's theta, congested.
    """
    incumbent = cfg.with_mode(AllocationMode.DEDICATED).with_hopping(p_t=1.0)
    if incumbent.theta > 0:
        incumbent = _at_theta(incumbent, incumbent.theta)
    bounds = rate_lower_bounds(
        incumbent,
        AllocationMode.DEDICATED,
        interference_limited=True,
        load=load_state(incumbent, AllocationMode.DEDICATED, congested=True),
    )
    return bounds.beta_c_star, bounds.beta_d_star


def theta_partition_coeffs(
    cfg: NetworkConfig,
    thresholds: Tuple[float, float],
) -> ThetaPartitionCoeffs:
    """Per-interval aggregates A, C, E, F and the cellular slope D."""
    beta_c, beta_d = thresholds
    normalized = [t.b_d / cfg.b_total for t in cfg.d2d_types]

    breakpoints = sorted({b for b in normalized if b < 1.0})
    lowers = [0.0] + breakpoints
    uppers = breakpoints + [1.0]

    k = 2.0 * cfg.delta ** 2 * math.pi * kappa(cfg.alpha) * beta_d ** (2.0 / cfg.alpha)
    spectral_d = cfg.b_total * math.log2(1.0 + beta_d)

    regions: List[ThetaRegion] = []
    for index, (lower, upper) in enumerate(zip(lowers, uppers)):
        inner = tuple(j for j, b in enumerate(normalized) if b <= lower)
        outer = tuple(j for j, b in enumerate(normalized) if b > lower)
        weighted_inner = math.fsum(cfg.d2d_types[j].lambda_d * normalized[j] for j in inner)
        density_outer = math.fsum(cfg.d2d_types[j].lambda_d for j in outer)
        regions.append(
            ThetaRegion(
                index=index,
                lower=lower,
                upper=upper,
                a=spectral_d * weighted_inner,
                c=k * weighted_inner,
                e=spectral_d * density_outer,
                f=k * density_outer + 1.0,
                inner_types=inner,
                outer_types=outer,
            )
        )

    # Cellular slope: every BS busy (rho = 1), admission from the congested state
    congested = cfg.replace(theta=0.0, mode=AllocationMode.DEDICATED).with_hopping(p_t=1.0)
    coverage = coverage_cellular_dedicated_il(
        congested, beta_c, load_state(congested, AllocationMode.DEDICATED, congested=True)
    )
    d = 7.0 * cfg.b_total * cfg.lambda_b / 9.0 * math.log2(1.0 + beta_c) * coverage

    return ThetaPartitionCoeffs(regions=tuple(regions), d=d, beta_c=beta_c, beta_d=beta_d)


def region_objective(region: ThetaRegion, d: float, theta: float) -> float:
    """theta (A + E theta) / (F theta + C) - D theta; the constant D is left out."""
    denominator = region.f * theta + region.c
    d2d = theta * (region.a + region.e * theta) / denominator if denominator > 0 else 0.0
    return d2d - d * theta


def region_candidate(region: ThetaRegion, d: float) -> Tuple[float, bool]:
    """(candidate theta, rising) for one interval."""
    rising = region.e >= d * region.f
    if rising:
        return region.upper, True

    radicand = region.c * (region.a * region.f - region.e * region.c) / (
        region.f ** 2 * (d * region.f - region.e)
    )
    stationary = math.sqrt(max(radicand, 0.0)) - region.c / region.f
    return float(np.clip(stationary, region.lower, region.upper)), False


def theta_objective(
    cfg: NetworkConfig,
    theta: float,
    thresholds: Optional[Tuple[float, float]] = None,
) -> float:
    """Rate density at theta with p_f* substituted and cfg's p_t."""
    return rate_density(
        _at_theta(cfg, theta), AllocationMode.DEDICATED, thresholds=thresholds
    )


def optimal_theta(
    cfg: NetworkConfig,
    *,
    thresholds: Optional[Tuple[float, float]] = None,
    workers: Optional[int] = None,
) -> PartitionSolution:
    """
    Optimal spectrum partition from the per-interval candidates.

    Thresholds default to the incumbent maximisers and stay fixed while
    theta varies. Every candidate is evaluated; ties go to the smaller theta.
    Without heavy load (or with w < 1) the closed form does not apply and a
    full grid search over theta is returned instead.
    """
    cfg = cfg.with_mode(AllocationMode.DEDICATED)
    at_zero = cfg.replace(theta=0.0)
    if not is_heavily_loaded(at_zero) or cfg.w < 1:
        logger.warning(
            "Closed-form partition needs heavy load and w >= 1; using full grid search"
        )
        return full_grid_theta(cfg, workers=workers)

    cfg = cfg.with_hopping(p_t=1.0)
    thresholds = thresholds or incumbent_thresholds(cfg)
    coeffs = theta_partition_coeffs(cfg, thresholds)

    def evaluate(region: ThetaRegion) -> ThetaCandidate:
        theta, rising = region_candidate(region, coeffs.d)
        return ThetaCandidate(
            region=region.index,
            lower=region.lower,
            upper=region.upper,
            theta=theta,
            objective=theta_objective(cfg, theta, thresholds),
            closed_form_objective=region_objective(region, coeffs.d, theta) + coeffs.d,
            rising=rising,
            unit_rule_theta=min(1.0, region.upper) if rising else theta,
        )

    candidates = parallel_map(evaluate, coeffs.regions, workers)

    best = None
    for candidate in candidates:
        if best is None or beats(candidate.objective, best.objective):
            best = candidate
    logger.info("theta* = %.6f (region %d of %d)", best.theta, best.region, len(candidates))

    return PartitionSolution(
        p_t_star=tuple(1.0 for _ in cfg.d2d_types),
        p_f_star=optimal_frequency_hopping(cfg.replace(theta=best.theta)),
        theta_star=best.theta,
        objective=best.objective,
        method=SearchMethod.CLOSED_FORM,
        candidate_set=tuple(candidates),
        thresholds=thresholds,
        heavily_loaded=True,
    )


def full_grid_theta(
    cfg: NetworkConfig,
    step: float = 1e-3,
    thresholds: Optional[Tuple[float, float]] = None,
    workers: Optional[int] = None,
) -> PartitionSolution:
    """
    Exhaustive search over theta in {0, step, ..., 1}.

    thresholds=None maximises the rate bounds at every grid point.
    """
    cfg = cfg.with_mode(AllocationMode.DEDICATED)
    grid = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    values = parallel_map(lambda theta: theta_objective(cfg, theta, thresholds), grid, workers)

    best_index, best_value = 0, None
    for k, value in enumerate(values):
        if beats(value, best_value):
            best_index, best_value = k, value
    theta_star = float(grid[best_index])

    return PartitionSolution(
        p_t_star=tuple(t.p_t for t in cfg.d2d_types),
        p_f_star=optimal_frequency_hopping(cfg.replace(theta=theta_star)),
        theta_star=theta_star,
        objective=best_value,
        method=SearchMethod.FULL_GRID,
        thresholds=thresholds,
        heavily_loaded=is_heavily_loaded(cfg.replace(theta=0.0)),
    )
