"""
Monte Carlo estimators built on independent replications.

Replication r always uses replication_seed(seed, r), so results are the
same whatever the number of worker threads.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from analytic_engine.rates import assemble_rates, mixture
from monte_carlo.deployment import replication_seed, sample_deployment
from monte_carlo.sinr import (
    SINR_SENTINEL,
    d2d_interference,
    measure_sinr,
    measurement_rng,
)
from network_model.enums import AllocationMode, LinkClass, SimulationFidelity
from network_model.load import load_state
from network_model.models import EmpiricalCcdf, EmpiricalRates, NetworkConfig
from network_model.parallel import parallel_map

logger = logging.getLogger("monte_carlo")

CONFIDENCE = 0.95


def wilson_interval(
    successes: int,
    trials: int,
    confidence: float = CONFIDENCE,
) -> Tuple[float, float, float]:
    """
    Wilson score interval for a binomial proportion.

    Returns (low, high, half_width); the half-width is positive for any
    finite number of trials.
    """
    if trials < 1:
        raise ValueError("at least one trial is needed")
    z = float(norm.ppf(0.5 + confidence / 2.0))
    p = successes / trials
    z2n = z * z / trials
    center = (p + z2n / 2.0) / (1.0 + z2n)
    half = z / (1.0 + z2n) * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials))
    return max(center - half, 0.0), min(center + half, 1.0), half


def _check_replications(replications: int) -> None:
    if replications < 1:
        raise ValueError(f"replications must be >= 1, got {replications}")


def _sinr_samples(
    cfg: NetworkConfig,
    mode: AllocationMode,
    link_class: LinkClass,
    replications: int,
    seed: int,
    window: Optional[float],
    workers: Optional[int],
    fidelity: SimulationFidelity,
) -> List[float]:
    load = load_state(cfg, mode, congested=False)
    require_bs = link_class == LinkClass.CELLULAR

    def one(r: int) -> float:
        dep = sample_deployment(cfg, window, replication_seed(seed, r), require_bs=require_bs)
        return measure_sinr(dep, cfg, link_class, mode, load=load, fidelity=fidelity)

    return parallel_map(one, range(replications), workers)


def empirical_coverage(
    cfg: NetworkConfig,
    mode: Optional[AllocationMode],
    link_class: LinkClass,
    betas: Sequence[float],
    replications: int,
    seed: int = 0,
    *,
    window: Optional[float] = None,
    workers: Optional[int] = None,
    fidelity: SimulationFidelity = SimulationFidelity.THINNED,
) -> EmpiricalCcdf:
    """Empirical P(SINR > beta) with 95% Wilson intervals."""
    _check_replications(replications)
    mode = mode or cfg.mode
    grid = tuple(float(b) for b in betas)

    samples = np.array(
        _sinr_samples(cfg, mode, link_class, replications, seed, window, workers, fidelity)
    )
    capped = int(np.count_nonzero(samples >= SINR_SENTINEL))
    if capped:
        logger.warning("%d of %d %s SINR samples hit the sentinel", capped, replications, link_class.value)

    counts = tuple(int(np.count_nonzero(samples > b)) for b in grid)
    intervals = [wilson_interval(c, replications) for c in counts]

    return EmpiricalCcdf(
        link_class=link_class,
        mode=mode,
        betas=grid,
        counts=counts,
        replications=replications,
        seed=seed,
        half_widths=tuple(i[2] for i in intervals),
        ci_low=tuple(i[0] for i in intervals),
        ci_high=tuple(i[1] for i in intervals),
        capped_samples=capped,
    )


def _mean_and_stderr(values: Sequence[float]) -> Tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return mean, 0.0
    variance = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(variance / n)


def empirical_rates(
    cfg: NetworkConfig,
    mode: Optional[AllocationMode],
    replications: int,
    seed: int = 0,
    *,
    window: Optional[float] = None,
    workers: Optional[int] = None,
    fidelity: SimulationFidelity = SimulationFidelity.THINNED,
) -> EmpiricalRates:
    """
    Simulated average rates.

    log2(1 + SINR) is averaged over replications for each link class and
    passed through the same resource and admission prefactors as the
    analytic rates. Standard errors are those of the spectral efficiencies.
    Sentinel samples are kept at their capped value and counted.
    """
    _check_replications(replications)
    mode = mode or cfg.mode
    load = load_state(cfg, mode, congested=False)

    def one(r: int) -> Tuple[float, float]:
        dep = sample_deployment(cfg, window, replication_seed(seed, r), require_bs=True)
        sinr_d = measure_sinr(dep, cfg, LinkClass.D2D, mode, load=load, fidelity=fidelity)
        sinr_c = measure_sinr(dep, cfg, LinkClass.CELLULAR, mode, load=load, fidelity=fidelity)
        return sinr_d, sinr_c

    pairs = parallel_map(one, range(replications), workers)
    capped = sum(int(d >= SINR_SENTINEL) + int(c >= SINR_SENTINEL) for d, c in pairs)
    if capped:
        logger.warning("%d SINR samples hit the sentinel; rates are truncated", capped)

    se_d, stderr_d = _mean_and_stderr([math.log2(1.0 + d) for d, _ in pairs])
    se_c, stderr_c = _mean_and_stderr([math.log2(1.0 + c) for _, c in pairs])
    rate_c, rate_d = assemble_rates(cfg, mode, load, se_c, se_d)

    return EmpiricalRates(
        mode=mode,
        rate_cellular=rate_c,
        rate_d2d_per_type=rate_d,
        rate_d2d_mixture=mixture(cfg, rate_d),
        spectral_efficiency_cellular=se_c,
        spectral_efficiency_d2d=se_d,
        stderr_cellular=stderr_c,
        stderr_d2d=stderr_d,
        replications=replications,
        seed=seed,
        capped_samples=capped,
    )


def empirical_laplace(
    cfg: NetworkConfig,
    s: float,
    replications: int,
    seed: int = 0,
    *,
    window: Optional[float] = None,
    workers: Optional[int] = None,
) -> Tuple[float, float]:
    """
    Estimate E[exp(-s I)] for the D2D interference I at the window centre.

    Returns (estimate, standard error).
    """
    _check_replications(replications)
    if s < 0:
        raise ValueError(f"transform argument must be non-negative, got {s}")

    def one(r: int) -> float:
        dep = sample_deployment(cfg, window, replication_seed(seed, r))
        interference = d2d_interference(dep, cfg, measurement_rng(dep, LinkClass.D2D), dep.center)
        return math.exp(-s * interference)

    return _mean_and_stderr(parallel_map(one, range(replications), workers))
