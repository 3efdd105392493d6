"""Command-line interface for toric-diagonal.

Provides a ``click``-based CLI that runs the verification suites,
prints no-lift certificates and pretty-prints serialized lattice
objects.

Usage::

    toric-diagonal run
    toric-diagonal run --suite algebra --seed 7 --format markdown
    toric-diagonal run --suite all --out report.json --timings
    toric-diagonal run --config my-settings.yaml --jobs 4 --progress
    toric-diagonal no-lift --range 1..6
    toric-diagonal describe path.json
"""

import logging
import sys
from typing import Optional

import click

from toric_diagonal.config import load_config
from toric_diagonal.formatters import (
    describe_object,
    format_duration,
    render_json,
    render_markdown,
    render_no_lift_table,
)
from toric_diagonal.io import load_object, save_report
from toric_diagonal.lattice import Vertex
from toric_diagonal.models import SUITES
from toric_diagonal.parser import parse_range, parse_site
from toric_diagonal.progress import ProgressReporter
from toric_diagonal.runner import run_suite
from toric_diagonal.toric import GrowthCapExceeded, no_lift_certificate

#: Valid suite choices for the ``--suite`` option.
SUITE_CHOICES = click.Choice(list(SUITES) + ["all"])

#: Report formats for ``--format``.
FORMAT_CHOICES = click.Choice(["json", "markdown"])

_LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


@click.group()
@click.version_option(package_name="toric-diagonal")
@click.option("--verbose", "-v", count=True,
              help="Log INFO messages (-v) or DEBUG messages (-vv).")
def cli(verbose: int) -> None:
    """toric-diagonal: exact verification of the toric-code diagonal."""
    logging.basicConfig(
        level=_LOG_LEVELS[min(verbose, len(_LOG_LEVELS) - 1)],
        format="%(levelname)s %(name)s: %(message)s",
    )


@cli.command()
@click.option("--suite", "-s", type=SUITE_CHOICES, default="all",
              help="Suite to run (default: all).")
@click.option("--seed", type=int, default=None, help="Base RNG seed.")
@click.option("--box-size", type=int, default=None,
              help="Largest box radius for the symbolic suites.")
@click.option("--samples", type=int, default=None,
              help="Base sample count for randomized sweeps.")
@click.option("--time-budget", type=float, default=None,
              help="Seconds per suite before remaining checks are skipped.")
@click.option("--jobs", "-j", type=int, default=None,
              help="Worker threads per suite.")
@click.option("--format", "fmt", type=FORMAT_CHOICES, default="json",
              help="Report format (default: json).")
@click.option("--out", "-o", type=click.Path(), default=None,
              help="Write the report to a file instead of stdout.")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="YAML file overriding the bundled defaults.")
@click.option("--timings", is_flag=True, default=False,
              help="Include elapsed times in the report.")
@click.option("--progress", is_flag=True, default=False,
              help="Show a progress bar on stderr.")
def run(
    suite: str,
    seed: Optional[int],
    box_size: Optional[int],
    samples: Optional[int],
    time_budget: Optional[float],
    jobs: Optional[int],
    fmt: str,
    out: Optional[str],
    config_path: Optional[str],
    timings: bool,
    progress: bool,
) -> None:
    """Run verification suites and emit a report."""
    try:
        config = load_config(config_path).with_overrides(
            seed=seed,
            box_size=box_size,
            samples=samples,
            time_budget=time_budget,
            jobs=jobs,
        )
    except FileNotFoundError as exc:
        raise click.ClickException(str(exc))
    except ValueError as exc:
        raise click.ClickException(str(exc))

    click.echo(f"Running suite {suite} (seed {config.seed})...", err=True)
    reporter = ProgressReporter(enabled=progress)
    try:
        report = run_suite(suite, config, progress=reporter)
    except (ValueError, GrowthCapExceeded) as exc:
        raise click.ClickException(str(exc))

    counts = report.counts()
    click.echo(
        f"{counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped "
        f"in {format_duration(report.elapsed)}.",
        err=True,
    )
    if out:
        save_report(report, out, fmt, include_timing=timings)
        click.echo(f"Saved report to {out}", err=True)
    elif fmt == "json":
        click.echo(render_json(report, timings), nl=False)
    else:
        click.echo(render_markdown(report, timings), nl=False)

    if not report.passed:
        sys.exit(1)


@cli.command(name="no-lift")
@click.option("--range", "range_text", default="1..6", show_default=True,
              help="Box sizes as N or LO..HI.")
@click.option("--center", default="v:0,0", show_default=True,
              help="Box center as v:X,Y.")
def no_lift(range_text: str, center: str) -> None:
    """Print the no-lift certificate for a range of box sizes."""
    try:
        lo, hi = parse_range(range_text)
        site = parse_site(center)
        if not isinstance(site, Vertex):
            raise ValueError(f"Box center must be a vertex, got {center!r}")
        if lo < 1:
            raise ValueError(f"Box sizes must be >= 1, got {range_text!r}")
    except ValueError as exc:
        raise click.ClickException(str(exc))

    reports = [no_lift_certificate(n, site) for n in range(lo, hi + 1)]
    click.echo(render_no_lift_table(reports), nl=False)
    if not all(r.holds for r in reports):
        sys.exit(1)


@cli.command()
@click.argument("file", type=click.Path())
def describe(file: str) -> None:
    """Pretty-print a serialized patch, path or operator."""
    try:
        obj = load_object(file)
    except FileNotFoundError as exc:
        raise click.ClickException(str(exc))
    except ValueError as exc:
        raise click.ClickException(str(exc))
    click.echo(describe_object(obj), nl=False)


if __name__ == "__main__":
    cli()
