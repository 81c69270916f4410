"""
Sampling of one network realization on a square torus.

Draw order is fixed and never depends on hopping probabilities: Poisson
counts come from the unthinned densities and activity / subband decisions
compare stored uniforms against p_t and p_f. Two configurations that differ
only in p_t or p_f therefore see coupled realizations under the same seed.
"""

import csv
import logging
import math
from typing import Iterator, Optional

import numpy as np

from network_model.models import Deployment, NetworkConfig

logger = logging.getLogger("monte_carlo")

MAX_RESAMPLES = 100
REFERENCE_SUBBAND = 0


def default_window(cfg: NetworkConfig) -> float:
    """20 / sqrt(lambda_B): about 400 cells on the torus."""
    if cfg.lambda_b <= 0:
        raise ValueError("a window must be given when there are no BSs")
    return 20.0 / math.sqrt(cfg.lambda_b)


def minimum_window(cfg: NetworkConfig) -> float:
    if cfg.lambda_b <= 0:
        return 0.0
    return 10.0 / math.sqrt(cfg.lambda_b)


def replication_seed(seed: int, replication: int) -> int:
    """64-bit seed of replication r, independent of how replications are scheduled."""
    sequence = np.random.SeedSequence(seed, spawn_key=(replication,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _poisson_points(rng: np.random.Generator, density: float, window: float) -> np.ndarray:
    n = rng.poisson(density * window * window) if density > 0 else 0
    return rng.uniform(0.0, window, size=(n, 2))


def sample_deployment(
    cfg: NetworkConfig,
    window: Optional[float] = None,
    seed: int = 0,
    *,
    require_bs: bool = False,
) -> Deployment:
    """
    Sample BSs, cellular UEs and every D2D type, then plant the typical link.

    require_bs resamples the BS process until it is non-empty; the number of
    retries is kept on the deployment.
    """
    window = window if window is not None else default_window(cfg)
    if window < minimum_window(cfg):
        raise ValueError(
            f"window {window:.1f} m is below 10/sqrt(lambda_B) = {minimum_window(cfg):.1f} m"
        )

    rng = np.random.default_rng(seed)

    bs_points = _poisson_points(rng, cfg.lambda_b, window)
    resamples = 0
    while require_bs and bs_points.shape[0] == 0 and cfg.lambda_b > 0:
        if resamples >= MAX_RESAMPLES:
            raise RuntimeError(f"no BS sampled after {MAX_RESAMPLES} attempts")
        resamples += 1
        bs_points = _poisson_points(rng, cfg.lambda_b, window)
    if resamples:
        logger.warning("Resampled empty BS process %d time(s) (seed=%d)", resamples, seed)

    ue_points = _poisson_points(rng, cfg.lambda_u, window)

    tx_parts, rx_parts, type_parts, active_parts, subband_parts = [], [], [], [], []
    for index, t in enumerate(cfg.d2d_types):
        tx = _poisson_points(rng, t.lambda_d, window)
        n = tx.shape[0]
        offset = rng.normal(0.0, cfg.delta, size=(n, 2))
        activity_draws = rng.random(n)
        subband_draws = rng.random((n, cfg.b_total))

        active = activity_draws < t.p_t
        tx_parts.append(tx)
        rx_parts.append(np.mod(tx + offset, window))
        type_parts.append(np.full(n, index, dtype=int))
        active_parts.append(active)
        subband_parts.append(active[:, None] & (subband_draws < t.p_f))

    weights = np.array([t.lambda_d for t in cfg.d2d_types], dtype=float)
    probabilities = weights / weights.sum() if weights.sum() > 0 else None
    typical_type = int(rng.choice(cfg.num_types, p=probabilities))
    center = np.array([window / 2.0, window / 2.0])
    typical_tx = np.mod(center + rng.normal(0.0, cfg.delta, size=2), window)

    return Deployment(
        window=window,
        seed=seed,
        bs_points=bs_points,
        ue_points=ue_points,
        d2d_tx=np.concatenate(tx_parts) if tx_parts else np.empty((0, 2)),
        d2d_rx=np.concatenate(rx_parts) if rx_parts else np.empty((0, 2)),
        d2d_type=np.concatenate(type_parts) if type_parts else np.empty(0, dtype=int),
        d2d_active=np.concatenate(active_parts) if active_parts else np.empty(0, dtype=bool),
        d2d_subbands=(
            np.concatenate(subband_parts)
            if subband_parts
            else np.empty((0, cfg.b_total), dtype=bool)
        ),
        typical_tx=typical_tx,
        typical_rx=center,
        typical_type=typical_type,
        resample_count=resamples,
    )


def deployment_rows(dep: Deployment) -> Iterator[dict]:
    """Point list for plotting a realization: one row per point."""
    for x, y in dep.bs_points:
        yield {"kind": "bs", "x": x, "y": y, "type": "", "active": "", "reference_subband": ""}
    for x, y in dep.ue_points:
        yield {"kind": "ue", "x": x, "y": y, "type": "", "active": "", "reference_subband": ""}
    for k in range(dep.num_links):
        common = {
            "type": int(dep.d2d_type[k]),
            "active": int(dep.d2d_active[k]),
            "reference_subband": int(dep.d2d_subbands[k, REFERENCE_SUBBAND]),
        }
        yield {"kind": "d2d_tx", "x": dep.d2d_tx[k, 0], "y": dep.d2d_tx[k, 1], **common}
        yield {"kind": "d2d_rx", "x": dep.d2d_rx[k, 0], "y": dep.d2d_rx[k, 1], **common}
    typical = {"type": dep.typical_type, "active": 1, "reference_subband": 1}
    yield {"kind": "typical_tx", "x": dep.typical_tx[0], "y": dep.typical_tx[1], **typical}
    yield {"kind": "typical_rx", "x": dep.typical_rx[0], "y": dep.typical_rx[1], **typical}


DEPLOYMENT_COLUMNS = ("kind", "x", "y", "type", "active", "reference_subband")


def export_deployment(dep: Deployment, path: str) -> int:
    """Write the point list of a realization as CSV; returns the row count."""
    rows = 0
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=DEPLOYMENT_COLUMNS)
        writer.writeheader()
        for row in deployment_rows(dep):
            writer.writerow(row)
            rows += 1
    logger.info("Wrote %d deployment points to %s", rows, path)
    return rows
