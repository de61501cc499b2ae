"""Command-line entry point: gamma-m {construct|verify|gamma|hypergrid|halfbound} --config PATH ..."""
from collections.abc import Callable
import logging
from pathlib import Path
import sys
from typing import Any

import click
from pydantic import ValidationError

from src.configmodels.harness_config import CommandName, ExperimentManifest, HarnessSettings
from src.harness import ExitCode, run_command
from src.utils.log_services import setup_custom_logging


def _common_options(command: Callable[..., Any]) -> Callable[..., Any]:
    options = [
        click.option("--config", "config_path", required=True, type=click.Path(path_type=Path),
                     help="YAML or JSON config of the command"),
        click.option("--out", "output_dir", type=click.Path(path_type=Path), default=None,
                     help="Artifact directory (default: $GAMMA_OUTPUT_DIR or ./runs)"),
        click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=None, help="Override the master seed"),
        click.option("--stages", type=click.IntRange(min=0), default=None, help="Override the number of stages"),
        click.option("--horizon", type=click.IntRange(min=1), default=None, help="Override the interval horizon"),
        click.option("--bound-mode", type=click.Choice(["hoeffding", "exact-finite"]), default=None,
                     help="Override how stage parameters are certified"),
        click.option("--n-max-override", type=click.IntRange(min=1), default=None,
                     help="Allow a halfbound n_max above the configured cap"),
        click.option("--quiet", "verbosity", flag_value="quiet", help="Log warnings and errors only"),
        click.option("--verbose", "verbosity", flag_value="verbose", help="Log per-interval details"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _dispatch(command: CommandName, verbosity: str | None, output_dir: Path | None, **overrides: Any) -> None:
    settings = HarnessSettings()
    level = {"quiet": logging.WARNING, "verbose": logging.DEBUG}.get(verbosity or "normal", logging.INFO)
    logger = setup_custom_logging(settings.log_dir, level=level)
    try:
        manifest = ExperimentManifest(
            command=command,
            output_dir=output_dir or settings.output_dir,
            verbosity=verbosity or "normal",
            **overrides,
        )
    except ValidationError as e:
        logger.error(f"invalid invocation: {e}")
        sys.exit(int(ExitCode.CONFIG_ERROR))
    sys.exit(int(run_command(manifest, settings)))


@click.group()
def cli() -> None:
    """Finite-scale harness for the Gamma_m construction."""


@cli.command()
@_common_options
def construct(**kwargs: Any) -> None:
    """Build A, write the bit file, ledger and verification report."""
    _dispatch(CommandName.CONSTRUCT, **kwargs)


@cli.command()
@_common_options
def verify(**kwargs: Any) -> None:
    """Re-verify the artifacts of a construct run in --out."""
    _dispatch(CommandName.VERIFY, **kwargs)


@cli.command()
@_common_options
def gamma(**kwargs: Any) -> None:
    """Agreement profiles and finite gamma evidence."""
    _dispatch(CommandName.GAMMA, **kwargs)


@cli.command()
@_common_options
def hypergrid(**kwargs: Any) -> None:
    """Certify exact hypergeometric tails against the Hoeffding bound."""
    _dispatch(CommandName.HYPERGRID, **kwargs)


@cli.command()
@_common_options
def halfbound(**kwargs: Any) -> None:
    """Encode, corrupt and majority-decode random source sets."""
    _dispatch(CommandName.HALFBOUND, **kwargs)


if __name__ == "__main__":
    cli()
