"""
Scenario and experiment-spec loading.

YAML text is parsed, validated against the pydantic schemas and converted
to internal SI units. Every failure surfaces as ConfigError with one
(field, message) pair per problem.
"""

import logging
import os
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np
import yaml
from pydantic import ValidationError

from network_model.enums import (
    AllocationMode,
    OutputFormat,
    SimulationFidelity,
    Task,
)
from network_model.errors import ConfigError
from network_model.models import D2DTypeConfig, ExperimentSpec, NetworkConfig
from network_model.units import (
    db_to_linear,
    dbm_to_watts,
    mean_distance_to_delta,
    per_cell_to_density,
)
from scenarios.presets import PRESETS
from scenarios.schema import ExperimentSpecSchema, ScenarioSchema

logger = logging.getLogger("scenarios")


def safe_enum(enum_cls, value, default):
    """
    Safely convert string value to enum, with fallback.
    """
    if value is None:
        return default

    try:
        return enum_cls(value)
    except (ValueError, KeyError):
        return default


def _diagnostics(error: ValidationError, prefix: str = "") -> list:
    pairs = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "<root>"
        pairs.append((f"{prefix}{location}", item["msg"]))
    return pairs


def _parse_yaml(text: str, source: str) -> Dict[str, Any]:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError([(source, f"not valid YAML: {e}")]) from e
    if not isinstance(data, dict):
        raise ConfigError([(source, "expected a mapping at the top level")])
    return data


# ----------------------------
# Scenarios
# ----------------------------

def _density(direct: Optional[float], per_cell: Optional[float], cell_side: Optional[float]) -> float:
    if direct is not None:
        return float(direct)
    return per_cell_to_density(float(per_cell), float(cell_side))


def _power(watts: Optional[float], dbm: Optional[float]) -> float:
    return float(watts) if watts is not None else dbm_to_watts(float(dbm))


def scenario_from_mapping(data: Mapping[str, Any]) -> Tuple[str, NetworkConfig]:
    """Validate a scenario mapping; returns (name, NetworkConfig)."""
    try:
        schema = ScenarioSchema.model_validate(dict(data))
    except ValidationError as e:
        raise ConfigError(_diagnostics(e)) from e

    side = schema.cell_side_m
    if schema.subband_bandwidth_hz is not None:
        subband_hz = schema.subband_bandwidth_hz
    elif schema.bandwidth_hz is not None:
        subband_hz = schema.bandwidth_hz / schema.b_total
    else:
        subband_hz = 200e3

    types = tuple(
        D2DTypeConfig(
            lambda_d=_density(t.lambda_d, t.lambda_d_per_cell, side),
            b_d=t.b_d,
            p_t=t.p_t,
            p_f=t.p_f,
        )
        for t in schema.d2d_types
    )

    cfg = NetworkConfig(
        lambda_b=_density(schema.lambda_b, schema.lambda_b_per_cell, side),
        lambda_u=_density(schema.lambda_u, schema.lambda_u_per_cell, side),
        d2d_types=types,
        delta=(
            float(schema.delta)
            if schema.delta is not None
            else mean_distance_to_delta(float(schema.delta_mean_m))
        ),
        p_b=_power(schema.p_b, schema.p_b_dbm),
        p_d=_power(schema.p_d, schema.p_d_dbm),
        noise=_power(schema.noise, schema.noise_dbm),
        alpha=schema.alpha,
        b_total=schema.b_total,
        b_c=schema.b_c,
        w=schema.w,
        theta=schema.theta,
        mode=AllocationMode(schema.mode),
        subband_bandwidth_hz=subband_hz,
    )
    return schema.name, cfg


def load_scenario(source: str) -> Tuple[str, NetworkConfig]:
    """Load a bundled preset by name, or a scenario YAML file by path."""
    if source in PRESETS:
        return scenario_from_mapping(_parse_yaml(PRESETS[source], source))
    if not os.path.isfile(source):
        raise ConfigError([
            ("scenario", f"'{source}' is neither a preset ({', '.join(PRESETS)}) nor a file")
        ])
    with open(source, encoding="utf-8") as handle:
        return scenario_from_mapping(_parse_yaml(handle.read(), source))


# ----------------------------
# Experiment specs
# ----------------------------

def sweep_grid(start: float, stop: float, step: float) -> Tuple[float, ...]:
    """from, from+step, ... up to `to` inclusive (within rounding)."""
    n = int(np.floor((stop - start) / step + 1e-9))
    return tuple(float(np.round(start + k * step, 12)) for k in range(n + 1))


def experiment_from_mapping(data: Mapping[str, Any], base_dir: str = ".") -> ExperimentSpec:
    """Validate an experiment-spec mapping and resolve its scenario."""
    try:
        schema = ExperimentSpecSchema.model_validate(dict(data))
    except ValidationError as e:
        raise ConfigError(_diagnostics(e)) from e

    source = schema.scenario
    if source not in PRESETS and not os.path.isabs(source):
        source = os.path.join(base_dir, source)
    try:
        name, cfg = load_scenario(source)
    except ConfigError as e:
        raise ConfigError([(f"scenario.{f}", m) for f, m in e.diagnostics]) from e

    sweep_var, grid = None, ()
    if schema.sweep is not None:
        sweep_var = schema.sweep.var
        if schema.sweep.grid is not None:
            grid = tuple(float(v) for v in schema.sweep.grid)
        else:
            grid = sweep_grid(schema.sweep.start, schema.sweep.stop, schema.sweep.step)

    betas: Tuple[float, ...] = ()
    if schema.betas_db is not None:
        betas = tuple(
            db_to_linear(float(x))
            for x in np.linspace(schema.betas_db.start, schema.betas_db.stop, schema.betas_db.points)
        )

    return ExperimentSpec(
        scenario=cfg,
        scenario_name=name,
        task=Task(schema.task),
        mode=safe_enum(AllocationMode, schema.mode, None),
        sweep_var=sweep_var,
        sweep_grid=grid,
        betas=betas,
        replications=schema.replications,
        seed=schema.seed,
        tolerance=schema.tolerance,
        window=schema.window_m,
        fidelity=safe_enum(SimulationFidelity, schema.fidelity, SimulationFidelity.THINNED),
        output=schema.output,
        output_format=safe_enum(OutputFormat, schema.format, OutputFormat.CSV),
        workers=schema.workers,
    )


def load_experiment(path: str) -> ExperimentSpec:
    if not os.path.isfile(path):
        raise ConfigError([("spec", f"file not found: {path}")])
    with open(path, encoding="utf-8") as handle:
        data = _parse_yaml(handle.read(), path)
    return experiment_from_mapping(data, base_dir=os.path.dirname(os.path.abspath(path)))
