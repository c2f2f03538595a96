from pathlib import Path
from typing import Optional

import click
from rich.table import Table

from src.datasets import prepare

from .common import PATH, CliState, pass_state


@click.group("datasets")
def datasets():
    """Dataset manifests."""


@datasets.command("list")
@pass_state
def list_datasets(state: CliState):
    taxonomy = state.taxonomy()
    table = Table(title="Datasets")
    for column in ("dataset", "category", "split", "labels", "manifest"):
        table.add_column(column)
    for dataset_id in taxonomy.dataset_ids():
        descriptor = taxonomy.descriptor(dataset_id)
        manifest = taxonomy.manifest_path(dataset_id)
        table.add_row(
            dataset_id,
            descriptor.category.value,
            descriptor.split,
            str(len(descriptor.class_labels)),
            str(manifest) if manifest.is_file() else "[dim]not prepared[/dim]",
        )
    state.console.print(table)


@datasets.command("prepare")
@click.option("--dataset", required=True, help="Dataset id from the taxonomy")
@click.option("--root", type=click.Path(exists=True, file_okay=False, path_type=Path),
              help="Extracted dataset (default: configured dataset_roots entry)")
@click.option("--out", type=PATH, help="Manifest path (default: the taxonomy's manifest_path)")
@pass_state
def prepare_dataset(state: CliState, dataset: str, root: Optional[Path], out: Optional[Path]):
    """Write the manifest of a downloaded dataset."""
    root = root or state.settings.dataset_roots.get(dataset)
    if root is None:
        raise click.UsageError(f"no --root given and no dataset_roots entry for {dataset}")
    target = prepare(dataset, root, state.taxonomy(), out=out)
    state.console.print(f"{dataset}: manifest written to {target}")
