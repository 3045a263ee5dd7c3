"""Command line entry point.

    uniflab <command> --scenario PATH [--format canonical|prose] [--cap-n K] [--seed S]

Exit codes: 0 every check passed, 1 a check failed, 2 invalid input,
3 a size cap was exceeded.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import json
import sys

import click

from .errors import CapExceededError, InvalidInputError
from .report import render_prose, run
from .scenario import COMMANDS, load_scenario

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("command", type=click.Choice(COMMANDS))
@click.option("--scenario", "scenario_path", required=True, type=click.Path(dir_okay=False),
              help="YAML scenario file.")
@click.option("--format", "fmt", type=click.Choice(["canonical", "prose"]), default="canonical",
              show_default=True)
@click.option("--cap-n", type=click.IntRange(min=1), default=None,
              help="Override the carrier-size cap (default $UNIFLAB_CAP_N or 7).")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized checks.")
@click.option("--timing", is_flag=True, help="Append a timing sidecar outside the canonical body.")
def main(command, scenario_path, fmt, cap_n, seed, timing):
    """Run a uniform-structure check on a finite scenario."""
    try:
        sc = load_scenario(scenario_path)
        if cap_n is not None:
            sc.caps["n"] = cap_n
        report = run(sc, command, seed=seed)
    except CapExceededError as exc:
        click.echo(f"cap exceeded: {exc}", err=True)
        sys.exit(EXIT_CAP)
    except InvalidInputError as exc:
        click.echo(f"invalid input: {exc}", err=True)
        sys.exit(EXIT_INPUT)

    if fmt == "canonical":
        body = report.canonical()
        body["sha256"] = report.digest()
        if timing:
            body["timing"] = report.timing
        click.echo(json.dumps(body, indent=2, ensure_ascii=False))
    else:
        click.echo(render_prose(report), nl=False)
        if timing:
            click.echo(f"timing: {report.timing}")
    for name, secs in report.timing.items():
        click.echo(f"{name}: {secs:.3f}s", err=True)
    sys.exit(EXIT_PASS if report.passed else EXIT_FAIL)


if __name__ == "__main__":  # pragma: no cover
    main()
