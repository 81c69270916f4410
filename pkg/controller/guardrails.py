"""
Guardrails System

Checks experiment specs before any computation and output rows before
they are written.

Design Principles:
- Violations block the run; warnings are logged and the run continues
- One violation per offending field, so diagnostics can be printed as is
- New checks are added as methods on the check classes below
"""

import logging
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from controller.sweeps import SWEEP_VARIABLES, is_sweep_variable
from monte_carlo.deployment import minimum_window
from network_model.enums import AllocationMode, Task
from network_model.errors import ConfigError
from network_model.load import is_heavily_loaded
from network_model.models import ExperimentSpec, NetworkConfig

logger = logging.getLogger("controller")


def _has_cellular_traffic(cfg: NetworkConfig) -> bool:
    """Cellular UEs, or D2D links that fall back to cellular mode."""
    return cfg.lambda_u > 0 or any(t.lambda_d > 0 and t.p_t < 1 for t in cfg.d2d_types)


@dataclass
class GuardrailViolation:
    """
    Records a guardrail violation
    """
    violation_type: str
    severity: str  # low, medium, high, critical
    message: str
    timestamp: str
    context: Dict[str, Any] = field(default_factory=dict)


class GuardrailResult:
    """
    Result of guardrail check
    """
    def __init__(self):
        self.passed = True
        self.violations: List[GuardrailViolation] = []
        self.warnings: List[str] = []

    def add_violation(
        self,
        violation_type: str,
        severity: str,
        message: str,
        context: Optional[Dict] = None
    ):
        self.passed = False
        self.violations.append(
            GuardrailViolation(
                violation_type=violation_type,
                severity=severity,
                message=message,
                timestamp=datetime.now(timezone.utc).isoformat(),
                context=context or {}
            )
        )

    def add_warning(self, message: str):
        self.warnings.append(message)

    def merge(self, other: "GuardrailResult") -> None:
        if not other.passed:
            self.passed = False
            self.violations.extend(other.violations)
        self.warnings.extend(other.warnings)

    def diagnostics(self) -> List[tuple]:
        """(field, message) pairs for ConfigError."""
        return [(v.context.get("field", v.violation_type), v.message) for v in self.violations]


class ScenarioGuardrails:
    """
    Physical and MAC parameter checks on a NetworkConfig
    """

    def validate(self, cfg: NetworkConfig) -> GuardrailResult:
        result = GuardrailResult()

        if cfg.alpha <= 2:
            result.add_violation(
                "divergent_path_loss", "critical",
                f"alpha must exceed 2 (got {cfg.alpha})", {"field": "alpha"}
            )
        for name in ("lambda_b", "lambda_u", "delta", "noise"):
            if getattr(cfg, name) < 0:
                result.add_violation(
                    "negative_parameter", "high",
                    f"{name} must be non-negative", {"field": name}
                )
        for name in ("p_b", "p_d", "w"):
            if getattr(cfg, name) <= 0:
                result.add_violation(
                    "non_positive_parameter", "high",
                    f"{name} must be positive", {"field": name}
                )
        if not 0 <= cfg.theta <= 1:
            result.add_violation(
                "probability_out_of_range", "high",
                "theta must lie in [0, 1]", {"field": "theta"}
            )
        if cfg.b_c > cfg.b_total:
            result.add_violation(
                "demand_exceeds_band", "high",
                f"b_c = {cfg.b_c} exceeds B = {cfg.b_total}", {"field": "b_c"}
            )
        if not cfg.d2d_types:
            result.add_violation(
                "no_d2d_types", "high", "at least one D2D type is required",
                {"field": "d2d_types"}
            )

        for i, t in enumerate(cfg.d2d_types):
            prefix = f"d2d_types.{i}"
            if t.lambda_d < 0:
                result.add_violation(
                    "negative_parameter", "high", "lambda_d must be non-negative",
                    {"field": f"{prefix}.lambda_d"}
                )
            for name in ("p_t", "p_f"):
                if not 0 <= getattr(t, name) <= 1:
                    result.add_violation(
                        "probability_out_of_range", "high", f"{name} must lie in [0, 1]",
                        {"field": f"{prefix}.{name}"}
                    )
            if t.b_d > cfg.b_total:
                result.add_violation(
                    "demand_exceeds_band", "high",
                    f"b_d = {t.b_d} exceeds B = {cfg.b_total}", {"field": f"{prefix}.b_d"}
                )

        if cfg.lambda_b == 0:
            result.add_warning("lambda_b = 0: cellular coverage is undefined")
        if cfg.mode == AllocationMode.DEDICATED and cfg.theta == 1 and _has_cellular_traffic(cfg):
            result.add_violation(
                "no_cellular_spectrum", "high",
                "theta = 1 leaves no subbands for cellular users", {"field": "theta"}
            )
        if cfg.mode == AllocationMode.DEDICATED and cfg.theta == 0:
            result.add_warning("theta = 0 leaves no D2D spectrum")
        if result.passed and cfg.b_total > 0 and not is_heavily_loaded(cfg.replace(theta=0.0), cfg.mode):
            result.add_warning("scenario is not heavily loaded; optimizers fall back to grid search")

        return result


class ExperimentGuardrails:
    """
    Task-level checks on an ExperimentSpec
    """

    SIMULATION_TASKS = (Task.VALIDATE,)

    def validate(self, spec: ExperimentSpec) -> GuardrailResult:
        result = GuardrailResult()
        cfg = spec.scenario.with_mode(spec.effective_mode)

        if spec.task == Task.SWEEP:
            if not spec.sweep_var:
                result.add_violation(
                    "missing_sweep", "high", "sweep task needs a variable", {"field": "sweep.var"}
                )
            elif not is_sweep_variable(spec.sweep_var, cfg.num_types):
                result.add_violation(
                    "unknown_sweep_variable", "high",
                    f"'{spec.sweep_var}' is not one of {', '.join(SWEEP_VARIABLES)}",
                    {"field": "sweep.var"}
                )
            if not spec.sweep_grid:
                result.add_violation(
                    "empty_sweep_grid", "high", "sweep grid is empty", {"field": "sweep"}
                )
            elif any(b <= a for a, b in zip(spec.sweep_grid, spec.sweep_grid[1:])):
                result.add_violation(
                    "unsorted_sweep_grid", "high", "sweep grid must be strictly increasing",
                    {"field": "sweep"}
                )

        if spec.task in self.SIMULATION_TASKS:
            if spec.replications < 1:
                result.add_violation(
                    "no_replications", "high", "replications must be >= 1",
                    {"field": "replications"}
                )
            if spec.window is not None and spec.window < minimum_window(cfg):
                result.add_violation(
                    "window_too_small", "high",
                    f"window must be at least 10/sqrt(lambda_B) = {minimum_window(cfg):.1f} m",
                    {"field": "window_m"}
                )
            if spec.window is None and cfg.lambda_b <= 0:
                result.add_violation(
                    "missing_window", "high", "window_m is required when lambda_b = 0",
                    {"field": "window_m"}
                )
            if spec.tolerance <= 0:
                result.add_violation(
                    "invalid_tolerance", "high", "tolerance must be positive",
                    {"field": "tolerance"}
                )

        if any(b2 < b1 for b1, b2 in zip(spec.betas, spec.betas[1:])):
            result.add_violation(
                "unsorted_betas", "high", "beta grid must be ascending", {"field": "betas_db"}
            )
        return result


class OutputGuardrails:
    """
    Numerical sanity of result rows before they are written
    """

    PROBABILITY_COLUMNS = ("ccdf", "empirical_ccdf", "ci_low", "ci_high")

    def validate_rows(self, rows: List[Dict[str, Any]]) -> GuardrailResult:
        result = GuardrailResult()
        for k, row in enumerate(rows):
            for key, value in row.items():
                if isinstance(value, float) and math.isnan(value):
                    result.add_violation(
                        "non_finite_output", "critical", f"row {k}: {key} is NaN",
                        {"field": key, "row": k}
                    )
                    return result
            for key in self.PROBABILITY_COLUMNS:
                value = row.get(key)
                if value is not None and not -1e-12 <= value <= 1 + 1e-12:
                    result.add_violation(
                        "probability_out_of_range", "critical",
                        f"row {k}: {key} = {value} outside [0, 1]",
                        {"field": key, "row": k}
                    )
                    return result
        return result


class GuardrailOrchestrator:
    """
    Main guardrail system - coordinates all checks
    """

    def __init__(self):
        self.scenario_guardrails = ScenarioGuardrails()
        self.experiment_guardrails = ExperimentGuardrails()
        self.output_guardrails = OutputGuardrails()

    def validate_input(self, spec: ExperimentSpec) -> GuardrailResult:
        """
        Run all input validations
        """
        result = GuardrailResult()
        for check in (
            self.scenario_guardrails.validate(spec.scenario.with_mode(spec.effective_mode)),
            self.experiment_guardrails.validate(spec),
        ):
            result.merge(check)
        return result

    def validate_output(self, rows: List[Dict[str, Any]]) -> GuardrailResult:
        """
        Run all output validations
        """
        return self.output_guardrails.validate_rows(rows)

    def log_violation(self, violation: GuardrailViolation):
        logger.warning(
            "GUARDRAIL VIOLATION: [%s] %s: %s",
            violation.severity, violation.violation_type, violation.message,
        )


# Singleton instance
guardrails = GuardrailOrchestrator()


def validate_config(cfg: NetworkConfig) -> NetworkConfig:
    """Raise ConfigError when a programmatically built scenario is invalid."""
    result = guardrails.scenario_guardrails.validate(cfg)
    for warning in result.warnings:
        logger.warning("SCENARIO WARNING: %s", warning)
    if not result.passed:
        raise ConfigError(result.diagnostics())
    return cfg
