"""
Experiment orchestrator

Pipeline for one ExperimentSpec:
- Guardrails: validate scenario and task parameters
- Result cache lookup
- Task handler (coverage, rates, validate, optimize, sweep)
- Guardrails: validate output rows
- Serialise and write
- Cache result
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from analytic_engine.coverage import coverage_curve, default_betas
from analytic_engine.rates import per_cell_throughput_bps, rates
from controller.guardrails import guardrails
from controller.hasher import hash_config, hash_payload
from controller.response_builder import (
    coverage_rows,
    rate_row,
    render_record,
    render_rows,
    solution_record,
    solution_rows,
    write_output,
)
from controller.sweeps import run_sweep
from monte_carlo.estimators import empirical_coverage
from network_model.cache import get_cached, set_cached
from network_model.enums import LinkClass, OutputFormat, Task
from network_model.models import ExperimentSpec
from optimizer.engine import solve

logger = logging.getLogger("controller")


class SpecRejected(Exception):
    """Raised when guardrails block an experiment spec"""

    def __init__(self, diagnostics: List[Tuple[str, str]]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(f"{f}: {m}" for f, m in diagnostics))


class OutputRejected(ArithmeticError):
    """Raised when computed rows fail the output checks"""


@dataclass
class RunOutcome:
    task: Task
    rows: List[Dict[str, Any]]
    record: Dict[str, Any] = field(default_factory=dict)
    passed: Optional[bool] = None
    text: str = ""
    cache_hit: bool = False


# ==========================================
# Task handlers
# ==========================================

def _coverage(spec: ExperimentSpec) -> RunOutcome:
    cfg = spec.scenario.with_mode(spec.effective_mode)
    betas = spec.betas or default_betas()
    rows = []
    for link_class in (LinkClass.D2D, LinkClass.CELLULAR):
        curve = coverage_curve(cfg, link_class, betas=betas, workers=spec.workers)
        rows.extend(coverage_rows(cfg, curve))
    return RunOutcome(task=spec.task, rows=rows)


def _rates(spec: ExperimentSpec) -> RunOutcome:
    cfg = spec.scenario.with_mode(spec.effective_mode)
    report = rates(cfg)
    throughput = per_cell_throughput_bps(cfg, report)
    return RunOutcome(
        task=spec.task,
        rows=[rate_row(cfg, report, throughput)],
        record={"throughput_per_cell_bps": throughput},
    )


def _validate(spec: ExperimentSpec) -> RunOutcome:
    """Analytic CCDFs against Monte Carlo; PASS when every deviation is within tolerance."""
    cfg = spec.scenario.with_mode(spec.effective_mode)
    betas = spec.betas or default_betas()
    rows, summary = [], {}
    for link_class in (LinkClass.D2D, LinkClass.CELLULAR):
        curve = coverage_curve(cfg, link_class, betas=betas, workers=spec.workers)
        empirical = empirical_coverage(
            cfg,
            cfg.mode,
            link_class,
            betas,
            spec.replications,
            spec.seed,
            window=spec.window,
            workers=spec.workers,
            fidelity=spec.fidelity,
        )
        class_rows = coverage_rows(cfg, curve, empirical)
        summary[link_class.value] = max(r["deviation"] for r in class_rows)
        rows.extend(class_rows)

    max_deviation = max(summary.values())
    passed = max_deviation <= spec.tolerance
    logger.info("Max CCDF deviation %.4f (tolerance %.4f)", max_deviation, spec.tolerance)
    return RunOutcome(
        task=spec.task,
        rows=rows,
        record={
            "max_deviation": summary,
            "tolerance": spec.tolerance,
            "replications": spec.replications,
            "seed": spec.seed,
            "result": "PASS" if passed else "FAIL",
        },
        passed=passed,
    )


def _optimize(spec: ExperimentSpec) -> RunOutcome:
    cfg = spec.scenario.with_mode(spec.effective_mode)
    solution = solve(cfg)
    return RunOutcome(
        task=spec.task,
        rows=solution_rows(cfg, solution),
        record=solution_record(cfg, solution),
    )


def _sweep(spec: ExperimentSpec) -> RunOutcome:
    rows = run_sweep(
        spec.scenario,
        spec.sweep_var,
        spec.sweep_grid,
        mode=spec.effective_mode,
        workers=spec.workers,
    )
    record: Dict[str, Any] = {"sweep_var": spec.sweep_var, "points": len(rows)}
    if rows and "objective" in rows[0]:
        best = max(rows, key=lambda r: r["objective"])
        record["argmax"] = best["sweep_value"]
    return RunOutcome(task=spec.task, rows=rows, record=record)


TASK_HANDLERS: Dict[Task, Callable[[ExperimentSpec], RunOutcome]] = {
    Task.COVERAGE: _coverage,
    Task.RATES: _rates,
    Task.VALIDATE: _validate,
    Task.OPTIMIZE: _optimize,
    Task.SWEEP: _sweep,
}


def spec_key(spec: ExperimentSpec) -> str:
    """Cache key: everything that changes the output; worker count excluded."""
    return hash_payload({
        "scenario": hash_config(spec.scenario),
        "task": spec.task.value,
        "mode": spec.effective_mode.value,
        "sweep_var": spec.sweep_var,
        "sweep_grid": list(spec.sweep_grid),
        "betas": list(spec.betas),
        "replications": spec.replications,
        "seed": spec.seed,
        "tolerance": spec.tolerance,
        "window": spec.window,
        "fidelity": spec.fidelity.value,
        "format": spec.output_format.value,
    })


def run_experiment(spec: ExperimentSpec) -> RunOutcome:
    """
    Run one experiment end to end. Writes spec.output when it is set.

    Raises SpecRejected for invalid specs and OutputRejected when the
    computed rows fail the numerical checks.
    """

    # ==========================================
    # PHASE 0: GUARDRAILS (Input Validation)
    # ==========================================
    check = guardrails.validate_input(spec)
    if not check.passed:
        for violation in check.violations:
            guardrails.log_violation(violation)
        raise SpecRejected(check.diagnostics())

    for warning in check.warnings:
        logger.warning("GUARDRAIL WARNING: %s", warning)

    # ==========================================
    # PHASE 1: CACHE + TASK
    # ==========================================
    key = spec_key(spec)
    outcome = get_cached(key)
    if outcome is not None:
        outcome = RunOutcome(**{**outcome.__dict__, "cache_hit": True})
    else:
        outcome = TASK_HANDLERS[spec.task](spec)

        # ==========================================
        # PHASE 2: GUARDRAILS (Output Validation)
        # ==========================================
        output_check = guardrails.validate_output(outcome.rows)
        if not output_check.passed:
            for violation in output_check.violations:
                guardrails.log_violation(violation)
            raise OutputRejected(output_check.violations[0].message)

        if spec.output_format == OutputFormat.RECORD and outcome.record:
            outcome.text = render_record({**outcome.record, "rows": outcome.rows})
        else:
            outcome.text = render_rows(outcome.rows, spec.output_format, spec.seed)
        set_cached(key, outcome)

    # ==========================================
    # PHASE 3: ARTIFACTS
    # ==========================================
    if spec.output:
        write_output(outcome.text, spec.output)

    return outcome
