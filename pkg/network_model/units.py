"""
Boundary conversions. Everything inside the library is linear SI:
watts, meters, points per square meter.
"""

import math


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0:
        return float("-inf")
    return 10.0 * math.log10(value)


def per_cell_to_density(count: float, cell_side_m: float) -> float:
    """Convert "count per cell_side_m squared" into points per m²."""
    return count / (cell_side_m ** 2)


def mean_distance_to_delta(mean_distance_m: float) -> float:
    """Rayleigh link distance: mean = delta * sqrt(pi/2)."""
    return mean_distance_m / math.sqrt(math.pi / 2.0)


def delta_to_mean_distance(delta: float) -> float:
    return delta * math.sqrt(math.pi / 2.0)
