"""Command-line entry point: ``tspe <command> ...`` or ``python -m src``."""
import sys
from pathlib import Path
from typing import List, Optional

import click
from rich.console import Console
from rich.markup import escape

from src.commands import COMMANDS
from src.commands.common import CliState
from src.config import load_settings
from src.errors import TSPEError
from src.utils.log import configure_logging


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="YAML settings file")
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), help="Embedding cache directory")
@click.option("--seed", type=int, help="Seed for generation and seed-sensitive backends")
@click.option("--jobs", type=click.IntRange(min=1), help="Parallel per-clip workers (default: available cores)")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging, including per-clip predictions")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[Path], cache_dir: Optional[Path], seed: Optional[int],
        jobs: Optional[int], verbose: bool):
    """Task-specific prompt ensembles for zero-shot audio classification."""
    configure_logging(verbose)
    settings = load_settings(config_path, cache_dir=cache_dir, seed=seed, jobs=jobs)
    ctx.obj = CliState(settings=settings, console=Console(), verbose=verbose)


for command in COMMANDS:
    cli.add_command(command)


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return the process exit code.

    0 on success, 2 on usage errors, 1 on any toolkit error (printed as
    ``<ErrorName>: <message>``).
    """
    err = Console(stderr=True, highlight=False)
    try:
        rv = cli.main(args=argv, prog_name="tspe", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        err.print("Aborted")
        return 1
    except TSPEError as exc:
        err.print(f"[bold red]{exc.code}[/bold red]: {escape(exc.message)}")
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
