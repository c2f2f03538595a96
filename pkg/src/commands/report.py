from pathlib import Path
from typing import Optional

import click

from src.config import DATA_DIR
from src.evaluation import (
    collect_reports,
    compare,
    load_reference_reports,
    load_report,
    render_csv,
    render_rich,
    report_table,
)

from .common import EXISTING_FILE, PATH, CliState, pass_state

REFERENCE_TABLE = DATA_DIR / "reference" / "accuracy.yaml"


@click.command("report")
@click.option("--in", "in_path", type=click.Path(exists=True, path_type=Path),
              help="report.json or a directory searched recursively")
@click.option("--format", "fmt", type=click.Choice(["table", "csv"]), default="table", show_default=True)
@click.option("--reference", is_flag=True, help="Include the published reference accuracies")
@click.option("--out", type=PATH, help="Write the CSV here instead of stdout")
@pass_state
def report_command(state: CliState, in_path: Optional[Path], fmt: str, reference: bool, out: Optional[Path]):
    """Accuracy table grouped by task category, best condition starred."""
    if in_path is None and not reference:
        raise click.UsageError("give --in, --reference or both")
    reports = collect_reports(in_path) if in_path is not None else []
    if reference:
        reports += load_reference_reports(REFERENCE_TABLE)
    if not reports:
        state.console.print(f"no report.json found under {in_path}")
        return
    table = report_table(reports, dataset_order=state.taxonomy().dataset_ids())
    if fmt == "csv":
        text = render_csv(table)
        if out is not None:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text, encoding="utf-8")
        else:
            click.echo(text, nl=False)
    else:
        state.console.print(render_rich(table))


@click.command("compare")
@click.option("--vanilla", "vanilla_path", type=EXISTING_FILE, required=True)
@click.option("--tspe", "tspe_path", type=EXISTING_FILE, required=True)
@pass_state
def compare_command(state: CliState, vanilla_path: Path, tspe_path: Path):
    """Absolute accuracy change of tspe over vanilla."""
    result = compare(load_report(vanilla_path), load_report(tspe_path))
    state.console.print(
        f"{result.dataset_id} {result.backend_id}: vanilla {result.vanilla.accuracy:.2f}% "
        f"-> tspe {result.tspe.accuracy:.2f}% ([bold]{result.delta:+.2f}[/bold] points)"
    )
