"""
Output rows and records.

Every row carries the full parameter tuple of the configuration it was
computed from, so any row can be regenerated on its own.
"""

import csv
import io
import json
import logging
from typing import Any, Dict, Iterable, List, Optional

import yaml

from controller.hasher import hash_config
from network_model.enums import OutputFormat
from network_model.models import (
    CoverageCurve,
    EmpiricalCcdf,
    NetworkConfig,
    PartitionSolution,
    RateReport,
)
from network_model.units import linear_to_db

logger = logging.getLogger("controller")

TOOL_NAME = "d2d-hopping"
TOOL_VERSION = "0.1.0"


def config_columns(cfg: NetworkConfig) -> Dict[str, Any]:
    row: Dict[str, Any] = {
        "scenario_id": hash_config(cfg),
        "mode": cfg.mode.value,
        "lambda_b": cfg.lambda_b,
        "lambda_u": cfg.lambda_u,
        "delta": cfg.delta,
        "p_b": cfg.p_b,
        "p_d": cfg.p_d,
        "noise": cfg.noise,
        "alpha": cfg.alpha,
        "b_total": cfg.b_total,
        "b_c": cfg.b_c,
        "w": cfg.w,
        "theta": cfg.theta,
        "subband_bandwidth_hz": cfg.subband_bandwidth_hz,
    }
    for i, t in enumerate(cfg.d2d_types, start=1):
        row[f"lambda_d_{i}"] = t.lambda_d
        row[f"b_d_{i}"] = t.b_d
        row[f"p_t_{i}"] = t.p_t
        row[f"p_f_{i}"] = t.p_f
    return row


def coverage_rows(
    cfg: NetworkConfig,
    curve: CoverageCurve,
    empirical: Optional[EmpiricalCcdf] = None,
) -> List[Dict[str, Any]]:
    """One row per beta; the empirical columns appear when a simulation ran."""
    base = config_columns(cfg)
    rows = []
    for k, (beta, ccdf) in enumerate(zip(curve.betas, curve.ccdf)):
        row = {
            **base,
            "link_class": curve.link_class.value,
            "beta_db": linear_to_db(beta),
            "beta_linear": beta,
            "ccdf": ccdf,
        }
        if empirical is not None:
            row.update({
                "empirical_ccdf": empirical.ccdf[k],
                "ci_low": empirical.ci_low[k],
                "ci_high": empirical.ci_high[k],
                "deviation": abs(empirical.ccdf[k] - ccdf),
                "replications": empirical.replications,
                "seed": empirical.seed,
            })
        rows.append(row)
    return rows


def rate_row(cfg: NetworkConfig, report: RateReport, throughput_bps: float) -> Dict[str, Any]:
    row = {
        **config_columns(cfg),
        "rate_cellular": report.rate_cellular,
        "rate_d2d": report.rate_d2d_mixture,
        "lb_cellular": report.lb_cellular,
        "lb_d2d": report.lb_d2d_mixture,
        "beta_c_star": report.beta_c_star,
        "beta_d_star": report.beta_d_star,
        "spectral_efficiency_cellular": report.spectral_efficiency_cellular,
        "spectral_efficiency_d2d": report.spectral_efficiency_d2d,
        "throughput_per_cell_bps": throughput_bps,
    }
    for i, (r, lb) in enumerate(zip(report.rate_d2d_per_type, report.lb_d2d_per_type), start=1):
        row[f"rate_d2d_{i}"] = r
        row[f"lb_d2d_{i}"] = lb
    return row


def solution_record(cfg: NetworkConfig, solution: PartitionSolution) -> Dict[str, Any]:
    """Structured record of an optimizer result, including every candidate."""
    return {
        "tool": f"{TOOL_NAME} {TOOL_VERSION}",
        "scenario_id": hash_config(cfg),
        "mode": cfg.mode.value,
        "method": solution.method.value,
        "heavily_loaded": solution.heavily_loaded,
        "p_t_star": list(solution.p_t_star),
        "p_f_star": list(solution.p_f_star),
        "theta_star": solution.theta_star,
        "objective": solution.objective,
        "thresholds": list(solution.thresholds) if solution.thresholds else None,
        "candidate_set": [
            {
                "region": c.region,
                "lower": c.lower,
                "upper": c.upper,
                "theta": c.theta,
                "objective": c.objective,
                "closed_form_objective": c.closed_form_objective,
                "rising": c.rising,
                "unit_rule_theta": c.unit_rule_theta,
            }
            for c in solution.candidate_set
        ],
    }


def solution_rows(cfg: NetworkConfig, solution: PartitionSolution) -> List[Dict[str, Any]]:
    """One row per theta candidate, or a single row when there are none."""
    base = config_columns(cfg)
    summary = {
        "method": solution.method.value,
        "theta_star": solution.theta_star,
        "objective_star": solution.objective,
    }
    for i, (pt, pf) in enumerate(zip(solution.p_t_star, solution.p_f_star), start=1):
        summary[f"p_t_star_{i}"] = pt
        summary[f"p_f_star_{i}"] = pf
    if not solution.candidate_set:
        return [{**base, **summary}]
    return [
        {
            **base,
            **summary,
            "region": c.region,
            "lower": c.lower,
            "upper": c.upper,
            "candidate_theta": c.theta,
            "candidate_objective": c.objective,
            "rising": c.rising,
            "chosen": c.theta == solution.theta_star,
        }
        for c in solution.candidate_set
    ]


def render_record(record: Dict[str, Any]) -> str:
    return yaml.safe_dump(record, sort_keys=False, default_flow_style=False)


def render_rows(
    rows: Iterable[Dict[str, Any]],
    fmt: OutputFormat = OutputFormat.CSV,
    seed: Optional[int] = None,
) -> str:
    """
    Serialise rows. CSV starts with a comment line naming the tool version
    and seed; columns are the union of row keys in first-seen order.
    """
    rows = list(rows)
    if fmt == OutputFormat.JSON:
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if fmt == OutputFormat.RECORD:
        return render_record({"tool": f"{TOOL_NAME} {TOOL_VERSION}", "seed": seed, "rows": rows})

    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)

    buffer = io.StringIO()
    buffer.write(f"# {TOOL_NAME} {TOOL_VERSION} seed={seed if seed is not None else '-'}\n")
    writer = csv.DictWriter(buffer, fieldnames=columns, restval="", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def write_output(text: str, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    logger.info("Wrote %s", path)
