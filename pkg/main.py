"""
d2d-hopping command line.

    python main.py validate table2-dedicated --replications 10000 --seed 1
    python main.py optimize fig10-distance280
    python main.py sweep table2-dedicated --var theta --from 0 --to 1 --step 0.02
    python main.py run experiment.yaml

Exit status: 0 success, 1 validation FAIL, 2 invalid configuration,
3 numerical failure.
"""

import functools
import logging
import os
import sys
from dataclasses import replace
from typing import Optional

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from controller.guardrails import validate_config
from controller.orchestrator import OutputRejected, RunOutcome, SpecRejected, run_experiment
from monte_carlo.deployment import export_deployment, sample_deployment
from network_model.enums import AllocationMode, OutputFormat, SimulationFidelity, Task
from network_model.errors import ConfigError, CostGuardError, QuadratureError
from network_model.models import ExperimentSpec
from scenarios.loader import load_experiment, load_scenario, sweep_grid
from scenarios.presets import PRESETS

load_dotenv()

console = Console()
err_console = Console(stderr=True)

EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

MODE_CHOICE = click.Choice([m.value for m in AllocationMode])
FORMAT_CHOICE = click.Choice([f.value for f in OutputFormat])


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(name)s: %(message)s",
        handlers=[RichHandler(console=err_console, show_time=False, show_path=False)],
        force=True,
    )


def _scenario(source: str):
    name, cfg = load_scenario(source)
    return name, validate_config(cfg)


def _mode(value: Optional[str]) -> Optional[AllocationMode]:
    return AllocationMode(value) if value else None


def _execute(spec: ExperimentSpec) -> None:
    """Run a spec and map every failure class to its exit status."""
    try:
        outcome = run_experiment(spec)
    except (ConfigError, SpecRejected) as e:
        diagnostics = getattr(e, "diagnostics", [("config", str(e))])
        err_console.print("[bold red]Invalid configuration[/bold red]")
        for field_name, message in diagnostics:
            err_console.print(f"  {field_name}: {message}")
        sys.exit(EXIT_CONFIG)
    except CostGuardError as e:
        err_console.print(f"[bold red]Refused:[/bold red] {e}")
        sys.exit(EXIT_CONFIG)
    except QuadratureError as e:
        err_console.print("[bold red]Numerical failure[/bold red]")
        for key, value in e.diagnostics().items():
            err_console.print(f"  {key}: {value}")
        sys.exit(EXIT_NUMERIC)
    except (OutputRejected, ArithmeticError) as e:
        err_console.print(f"[bold red]Numerical failure:[/bold red] {e}")
        sys.exit(EXIT_NUMERIC)

    _report(spec, outcome)
    if outcome.passed is False:
        sys.exit(EXIT_FAIL)


def _report(spec: ExperimentSpec, outcome: RunOutcome) -> None:
    if spec.task == Task.VALIDATE:
        table = Table(title=f"{spec.scenario_name}: analytic vs Monte Carlo")
        table.add_column("link class")
        table.add_column("max |deviation|", justify="right")
        for link_class, deviation in outcome.record["max_deviation"].items():
            table.add_row(link_class, f"{deviation:.4f}")
        console.print(table)
        colour = "green" if outcome.passed else "red"
        console.print(
            f"[bold {colour}]{outcome.record['result']}[/bold {colour}] "
            f"(tolerance {spec.tolerance}, {spec.replications} replications, seed {spec.seed})"
        )
    elif spec.task == Task.OPTIMIZE:
        record = outcome.record
        console.print(f"[bold]{spec.scenario_name}[/bold] ({record['mode']}, {record['method']})")
        console.print(f"  p_t* = {record['p_t_star']}")
        console.print(f"  p_f* = {record['p_f_star']}")
        if record["theta_star"] is not None:
            console.print(f"  theta* = {record['theta_star']:.6g}")
        console.print(f"  objective = {record['objective']:.6g}")
    elif spec.task == Task.RATES:
        row = outcome.rows[0]
        console.print(f"[bold]{spec.scenario_name}[/bold] ({row['mode']})")
        for key in ("rate_cellular", "rate_d2d", "lb_cellular", "lb_d2d", "throughput_per_cell_bps"):
            console.print(f"  {key} = {row[key]:.6g}")
    elif spec.task == Task.SWEEP and "argmax" in outcome.record:
        console.print(f"{spec.sweep_var}: objective argmax at {outcome.record['argmax']}")

    if spec.output:
        console.print(f"Wrote {spec.output}")
    elif spec.task in (Task.COVERAGE, Task.SWEEP):
        click.echo(outcome.text, nl=False)


@click.group()
@click.option(
    "--log-level",
    default=lambda: os.getenv("D2D_LOG_LEVEL", "WARNING"),
    show_default="D2D_LOG_LEVEL or WARNING",
)
@click.option("--workers", type=int, default=None, help="Worker threads (default: D2D_WORKERS).")
@click.pass_context
def cli(ctx: click.Context, log_level: str, workers: Optional[int]):
    """Analysis, simulation and optimisation of D2D hopping in cellular downlinks."""
    _configure_logging(log_level)
    ctx.obj = {"workers": workers}


def _guard_config(fn):
    """Scenario loading errors exit with status 2."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as e:
            err_console.print("[bold red]Invalid configuration[/bold red]")
            for field_name, message in e.diagnostics:
                err_console.print(f"  {field_name}: {message}")
            sys.exit(EXIT_CONFIG)
    return wrapper


@cli.command()
@click.argument("spec_file", type=click.Path())
@click.pass_context
@_guard_config
def run(ctx: click.Context, spec_file: str):
    """Run an experiment spec file."""
    spec = load_experiment(spec_file)
    if ctx.obj["workers"] is not None:
        spec = replace(spec, workers=ctx.obj["workers"])
    _execute(spec)


@cli.command()
@click.argument("scenario")
@click.option("--replications", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", "tolerance", type=float, default=0.015, show_default=True)
@click.option("--mode", type=MODE_CHOICE, default=None)
@click.option("--window", type=float, default=None, help="Window side in meters.")
@click.option("--fidelity", type=click.Choice([f.value for f in SimulationFidelity]), default="thinned")
@click.option("--output", "-o", type=click.Path(), default=None)
@click.pass_context
@_guard_config
def validate(ctx, scenario, replications, seed, tolerance, mode, window, fidelity, output):
    """Compare analytic and simulated SINR CCDFs."""
    name, cfg = _scenario(scenario)
    _execute(ExperimentSpec(
        scenario=cfg,
        scenario_name=name,
        task=Task.VALIDATE,
        mode=_mode(mode),
        replications=replications,
        seed=seed,
        tolerance=tolerance,
        window=window,
        fidelity=SimulationFidelity(fidelity),
        output=output,
        workers=ctx.obj["workers"],
    ))


@cli.command()
@click.argument("scenario")
@click.option("--mode", type=MODE_CHOICE, default=None)
@click.option("--output", "-o", type=click.Path(), default=None)
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="record", show_default=True)
@click.pass_context
@_guard_config
def optimize(ctx, scenario, mode, output, fmt):
    """Optimal hopping probabilities (and theta in dedicated mode)."""
    name, cfg = _scenario(scenario)
    _execute(ExperimentSpec(
        scenario=cfg,
        scenario_name=name,
        task=Task.OPTIMIZE,
        mode=_mode(mode),
        output=output,
        output_format=OutputFormat(fmt),
        workers=ctx.obj["workers"],
    ))


@cli.command()
@click.argument("scenario")
@click.option("--var", "var", required=True, help="lambda_u, p_t, p_f, p_t.<i>, p_f.<i>, theta, w or delta_mean.")
@click.option("--from", "start", type=float, required=True)
@click.option("--to", "stop", type=float, required=True)
@click.option("--step", type=float, required=True)
@click.option("--mode", type=MODE_CHOICE, default=None)
@click.option("--output", "-o", type=click.Path(), default=None)
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="csv", show_default=True)
@click.pass_context
@_guard_config
def sweep(ctx, scenario, var, start, stop, step, mode, output, fmt):
    """Vary one parameter and emit one row per grid point."""
    name, cfg = _scenario(scenario)
    if step <= 0 or stop < start:
        raise ConfigError([("sweep", "need step > 0 and --to >= --from")])
    _execute(ExperimentSpec(
        scenario=cfg,
        scenario_name=name,
        task=Task.SWEEP,
        mode=_mode(mode),
        sweep_var=var,
        sweep_grid=sweep_grid(start, stop, step),
        output=output,
        output_format=OutputFormat(fmt),
        workers=ctx.obj["workers"],
    ))


@cli.command()
@click.argument("scenario")
@click.option("--mode", type=MODE_CHOICE, default=None)
@click.option("--output", "-o", type=click.Path(), default=None)
@click.pass_context
@_guard_config
def coverage(ctx, scenario, mode, output):
    """Analytic SINR CCDFs on the default 40-point grid (-20..40 dB)."""
    name, cfg = _scenario(scenario)
    _execute(ExperimentSpec(
        scenario=cfg,
        scenario_name=name,
        task=Task.COVERAGE,
        mode=_mode(mode),
        output=output,
        workers=ctx.obj["workers"],
    ))


@cli.command()
@click.argument("scenario")
@click.option("--mode", type=MODE_CHOICE, default=None)
@click.option("--output", "-o", type=click.Path(), default=None)
@click.pass_context
@_guard_config
def rates(ctx, scenario, mode, output):
    """Average rates, lower bounds and per-cell throughput."""
    name, cfg = _scenario(scenario)
    _execute(ExperimentSpec(
        scenario=cfg,
        scenario_name=name,
        task=Task.RATES,
        mode=_mode(mode),
        output=output,
        workers=ctx.obj["workers"],
    ))


@cli.command()
@click.argument("scenario")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--window", type=float, default=None, help="Window side in meters.")
@click.option("--output", "-o", type=click.Path(), required=True)
@_guard_config
def snapshot(scenario, seed, window, output):
    """Export one sampled deployment as a point-list CSV."""
    _, cfg = _scenario(scenario)
    rows = export_deployment(sample_deployment(cfg, window, seed), output)
    console.print(f"Wrote {rows} points to {output}")


@cli.command()
def presets():
    """List bundled scenarios."""
    for name in PRESETS:
        click.echo(name)


if __name__ == "__main__":
    cli()
