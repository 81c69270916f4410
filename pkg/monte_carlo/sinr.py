"""
One SINR realization at the typical receiver on the reference subband.
"""

import logging
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from monte_carlo.deployment import REFERENCE_SUBBAND
from network_model.enums import AllocationMode, LinkClass, SimulationFidelity
from network_model.load import load_state
from network_model.models import Deployment, LoadState, NetworkConfig

logger = logging.getLogger("monte_carlo")

# Stand-in for infinite SINR; above any threshold the analytics use (1e4)
SINR_SENTINEL = 1e15

MIN_DISTANCE = 1e-9

# Measurement streams, kept apart from the sampling stream of the deployment
_STREAM = {LinkClass.D2D: 1, LinkClass.CELLULAR: 2}


def measurement_rng(dep: Deployment, link_class: LinkClass) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(dep.seed, spawn_key=(_STREAM[link_class],))
    )


def torus_distance(points: np.ndarray, origin: np.ndarray, window: float) -> np.ndarray:
    """Wrap-around Euclidean distance from origin to every row of points."""
    if points.shape[0] == 0:
        return np.empty(0)
    delta = np.abs(points - origin)
    delta = np.minimum(delta, window - delta)
    return np.maximum(np.hypot(delta[:, 0], delta[:, 1]), MIN_DISTANCE)


def scheduled_activity(dep: Deployment, cfg: NetworkConfig, mode: AllocationMode) -> np.ndarray:
    """
    Probability that each BS transmits on the reference subband, from the
    load actually associated with it.

    UEs and cellular-mode D2D transmitters attach to their nearest BS on
    the torus; a BS with load L serves min{1, L / B_C} of its subbands.
    """
    n_bs = dep.bs_points.shape[0]
    if n_bs == 0:
        return np.empty(0)
    b_cellular = cfg.b_cellular(mode)
    if b_cellular <= 0:
        return np.zeros(n_bs)

    tree = cKDTree(dep.bs_points, boxsize=dep.window)
    load = np.zeros(n_bs)

    if dep.ue_points.shape[0]:
        _, nearest = tree.query(dep.ue_points)
        np.add.at(load, nearest, float(cfg.b_c))

    relayed = ~dep.d2d_active
    if relayed.any():
        _, nearest = tree.query(dep.d2d_tx[relayed])
        demand = np.array([t.b_d for t in cfg.d2d_types], dtype=float)[dep.d2d_type[relayed]]
        np.add.at(load, nearest, demand)

    return np.minimum(1.0, load / b_cellular)


def _bs_interference(
    dep: Deployment,
    cfg: NetworkConfig,
    mode: AllocationMode,
    load: LoadState,
    rng: np.random.Generator,
    fidelity: SimulationFidelity,
    distances: np.ndarray,
    exclude: Optional[int] = None,
) -> float:
    n_bs = distances.shape[0]
    if n_bs == 0:
        return 0.0
    if fidelity == SimulationFidelity.SCHEDULED:
        probability = scheduled_activity(dep, cfg, mode)
    else:
        probability = np.full(n_bs, load.rho)
    keep = rng.random(n_bs) < probability
    fading = rng.exponential(1.0, size=n_bs)
    if exclude is not None:
        keep[exclude] = False
    return float(np.sum(cfg.p_b * fading[keep] * distances[keep] ** (-cfg.alpha)))


def d2d_interference(
    dep: Deployment,
    cfg: NetworkConfig,
    rng: np.random.Generator,
    origin: np.ndarray,
) -> float:
    """Rayleigh-faded power at origin from every D2D link on the reference subband."""
    on_subband = dep.d2d_subbands[:, REFERENCE_SUBBAND] if dep.num_links else np.empty(0, bool)
    tx = dep.d2d_tx[on_subband]
    fading = rng.exponential(1.0, size=tx.shape[0])
    distances = torus_distance(tx, origin, dep.window)
    return float(np.sum(cfg.p_d * fading * distances ** (-cfg.alpha)))


def _ratio(signal: float, interference: float, noise: float) -> float:
    denominator = interference + noise
    if denominator <= 0:
        return SINR_SENTINEL
    return min(signal / denominator, SINR_SENTINEL)


def measure_sinr(
    dep: Deployment,
    cfg: NetworkConfig,
    link_class: LinkClass,
    mode: Optional[AllocationMode] = None,
    rng: Optional[np.random.Generator] = None,
    *,
    load: Optional[LoadState] = None,
    fidelity: SimulationFidelity = SimulationFidelity.THINNED,
) -> float:
    """
    SINR of the typical D2D receiver or of a typical cellular UE at the centre.

    D2D interference comes from every link occupying the reference subband.
    BS interference (cellular class, or D2D class in shared mode) comes from
    BSs kept independently with probability rho, or with their scheduled
    activity in SCHEDULED fidelity. All links see i.i.d. exp(1) fading.
    """
    mode = mode or cfg.mode
    rng = rng or measurement_rng(dep, link_class)
    load = load or load_state(cfg, mode, congested=False)
    center = dep.center

    if link_class == LinkClass.D2D:
        signal_fading = rng.exponential(1.0)
        link_length = torus_distance(dep.typical_tx[None, :], dep.typical_rx, dep.window)[0]
        signal = cfg.p_d * signal_fading * link_length ** (-cfg.alpha)

        interference = d2d_interference(dep, cfg, rng, center)
        if mode == AllocationMode.SHARED:
            distances = torus_distance(dep.bs_points, center, dep.window)
            interference += _bs_interference(dep, cfg, mode, load, rng, fidelity, distances)
        return _ratio(signal, interference, cfg.noise)

    distances = torus_distance(dep.bs_points, center, dep.window)
    if distances.shape[0] == 0:
        return 0.0
    serving = int(np.argmin(distances))
    signal = cfg.p_b * rng.exponential(1.0) * distances[serving] ** (-cfg.alpha)

    interference = _bs_interference(
        dep, cfg, mode, load, rng, fidelity, distances, exclude=serving
    )
    if mode == AllocationMode.SHARED:
        interference += d2d_interference(dep, cfg, rng, center)
    return _ratio(signal, interference, cfg.noise)
