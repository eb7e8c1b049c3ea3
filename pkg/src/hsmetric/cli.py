"""Command-line interface for hsmetric."""

import logging
import math
import sys
from typing import Any

import click

from . import __version__
from .components.config_loader import Settings, load_settings
from .components.eulerian import validate
from .components.export import (
    write_metric_csv,
    write_metric_json,
    write_solve_csv,
    write_solve_json,
)
from .components.metric import verify_lipschitz
from .components.scenarios import Scenario, build_from_string
from .components.transport import solution_surface
from .components.verification import SUITES, PropertyResult, all_passed, run_suite
from .errors import HSMetricError

EXIT_VIOLATION = 1
EXIT_DOMAIN = 3

FORMATS = ["csv", "json"]


def display_warning(message: str) -> None:
    """Display a warning message."""
    click.secho(f"Warning: {message}", fg="yellow", err=True)


def display_error(message: str) -> None:
    """Display an error message."""
    click.secho(f"Error: {message}", fg="red", err=True)


def parse_times(_ctx: click.Context, _param: click.Parameter, value: str) -> list[float]:
    """Comma-separated non-negative reals, e.g. ``0,0.5,2``."""
    times = []
    for item in value.split(","):
        try:
            t = float(item.strip())
        except ValueError as e:
            raise click.BadParameter(f"{item.strip()!r} is not a number") from e
        if not math.isfinite(t) or t < 0:
            raise click.BadParameter("time must be non-negative")
        times.append(t)
    return times


def _settings(ctx: click.Context) -> Settings:
    return ctx.obj["SETTINGS"]


def _load_scenario(text: str, resolution: int) -> Scenario:
    scenario = build_from_string(text, resolution)
    report = validate(scenario.initial)
    if not report.valid:
        raise HSMetricError(f"{scenario.label} is not admissible: {'; '.join(report.violations)}")
    return scenario


times_option = click.option(
    "--times",
    default="0",
    show_default=True,
    callback=parse_times,
    help="Comma-separated non-negative times.",
)
resolution_option = click.option(
    "--resolution",
    type=click.IntRange(min=3),
    default=None,
    help="η-grid size for smooth scenarios. Defaults to HSMETRIC_RESOLUTION or 4096.",
)
format_option = click.option(
    "--format",
    "output_format",
    type=click.Choice(FORMATS),
    default="csv",
    show_default=True,
    help="Output format.",
)
out_option = click.option(
    "-o",
    "--out",
    default="-",
    type=click.Path(dir_okay=False, writable=True, allow_dash=True),
    help="Output file. Defaults to stdout.",
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(
    __version__,
    "-v",
    "--version",
    prog_name="hsmetric",
    message="%(prog)s %(version)s",
)
@click.option("--debug", is_flag=True, help="Enable debug logging.")
@click.pass_context
def cli(ctx: click.Context, debug: bool):
    """hsmetric: conservative Hunter–Saxton solutions and their Lipschitz metric."""
    settings = load_settings(warn=display_warning)
    settings.debug = debug or settings.debug
    logging.basicConfig(
        level=logging.DEBUG if settings.debug else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = {"DEBUG": settings.debug, "SETTINGS": settings}


@cli.command("solve")
@click.argument("scenario_arg", metavar="SCENARIO")
@times_option
@click.option(
    "--eta-samples",
    type=click.IntRange(min=1),
    default=None,
    help="Equispaced η-samples per time. Defaults to HSMETRIC_ETA_SAMPLES or 4096.",
)
@resolution_option
@format_option
@out_option
@click.pass_context
def solve(ctx: click.Context, scenario_arg: str, times: list[float], **kwargs: Any) -> None:
    """Tabulate the solution surface and the Eulerian states of a scenario."""
    settings = _settings(ctx)
    eta_samples = kwargs.get("eta_samples") or settings.eta_samples
    resolution = kwargs.get("resolution") or settings.resolution
    try:
        scenario = _load_scenario(scenario_arg, resolution)
        solution = scenario.solution()
        surface = solution_surface(solution.transport0, times, eta_samples)
        states = [(t, solution.state_at(t)) for t in sorted(set(times))]
    except HSMetricError as e:
        display_error(str(e))
        ctx.exit(EXIT_DOMAIN)

    with click.open_file(kwargs["out"], "w", encoding="utf-8") as stream:
        if kwargs["output_format"] == "json":
            write_solve_json(stream, scenario.label, surface, states)
        else:
            write_solve_csv(stream, surface, states)


@cli.command("metric")
@click.argument("first_arg", metavar="A")
@click.argument("second_arg", metavar="B")
@times_option
@resolution_option
@format_option
@out_option
@click.pass_context
def metric(
    ctx: click.Context, first_arg: str, second_arg: str, times: list[float], **kwargs: Any
) -> None:
    """Compare two solutions against the Lipschitz bound 1 + t + t²/8."""
    resolution = kwargs.get("resolution") or _settings(ctx).resolution
    try:
        first = _load_scenario(first_arg, resolution)
        second = _load_scenario(second_arg, resolution)
        sweep = verify_lipschitz(first.initial, second.initial, times, (first.label, second.label))
    except HSMetricError as e:
        display_error(str(e))
        ctx.exit(EXIT_DOMAIN)

    with click.open_file(kwargs["out"], "w", encoding="utf-8") as stream:
        if kwargs["output_format"] == "json":
            write_metric_json(stream, first.label, second.label, sweep.reports)
        else:
            write_metric_csv(stream, sweep.reports)
    if not sweep.passed:
        display_error("the Lipschitz bound is violated")
        ctx.exit(EXIT_VIOLATION)


def _result_line(result: PropertyResult) -> str:
    status = "PASS" if result.passed else "FAIL"
    return f"{result.name} | {status} | {result.max_error:.3e} | {result.detail}"


@cli.command("verify")
@click.argument("suite", type=click.Choice([*SUITES, "all"]))
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Random seed.")
@click.option(
    "--pairs", type=click.IntRange(min=1), default=None, help="Random pairs for lipschitz."
)
@resolution_option
@click.pass_context
def verify(ctx: click.Context, suite: str, **kwargs: Any) -> None:
    """Run a property suite and print a pass/fail table."""
    settings = _settings(ctx)
    seed = kwargs["seed"] if kwargs.get("seed") is not None else settings.seed
    pairs = kwargs.get("pairs") or settings.pairs
    resolution = kwargs.get("resolution") or settings.resolution
    try:
        results = run_suite(suite, seed, pairs, resolution)
    except HSMetricError as e:
        display_error(str(e))
        ctx.exit(EXIT_DOMAIN)

    click.echo("property | status | max error | detail")
    for result in results:
        click.secho(_result_line(result), fg=None if result.passed else "red")
    failed = sum(not r.passed for r in results)
    if all_passed(results):
        click.secho(f"{len(results)} properties passed", fg="green")
    else:
        click.secho(f"{failed} of {len(results)} properties failed", fg="red")
        ctx.exit(EXIT_VIOLATION)
