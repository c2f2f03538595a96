#!/usr/bin/env python3
"""
Evaluate every prepared dataset under both conditions on both MS-CLAP
checkpoints and print the accuracy table next to the reference numbers.

Datasets without a manifest are skipped. Needs the model extras
(requirements-models.txt) and the downloaded datasets.
"""

import sys
from pathlib import Path

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import click
from rich.console import Console

from src.config import DATA_DIR, RunConfig, load_settings
from src.errors import TSPEError
from src.evaluation import load_reference_reports, render_csv, render_rich, report_table, run_evaluation
from src.schemas.evaluation import Condition
from src.taxonomy import Taxonomy
from src.utils.log import configure_logging

BACKENDS = ("msclap2023", "msclap2022")


@click.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("runs/table"), show_default=True)
@click.option("--runs", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--with-reference/--without-reference", default=True, show_default=True)
def reproduce(config_path, out, runs, with_reference):
    configure_logging()
    console = Console()
    settings = load_settings(config_path)
    taxonomy = Taxonomy.load(settings.taxonomy_path)

    reports = []
    for dataset_id in taxonomy.dataset_ids():
        manifest_path = taxonomy.manifest_path(dataset_id)
        if not manifest_path.is_file():
            console.print(f"[dim]skip {dataset_id}: no manifest at {manifest_path}[/dim]")
            continue
        category = taxonomy.descriptor(dataset_id).category
        for backend_id in BACKENDS:
            for condition in Condition:
                run_config = RunConfig(
                    dataset_id=dataset_id,
                    backend_id=backend_id,
                    condition=condition.value,
                    runs=runs,
                    seed=settings.seed,
                    taxonomy_path=settings.taxonomy_path,
                    manifest_path=manifest_path,
                    dataset_root=settings.dataset_roots.get(dataset_id, manifest_path.parent),
                    out_dir=out / f"{dataset_id}-{backend_id}-{condition.value}",
                    cache_dir=settings.cache_dir,
                    promptset_path=(
                        settings.data_dir / "promptsets" / f"{category.value}.json"
                        if condition == Condition.TSPE else None
                    ),
                    averaging=settings.averaging,
                    jobs=settings.jobs,
                )
                try:
                    reports.append(run_evaluation(run_config, settings, progress=True))
                except TSPEError as e:
                    console.print(f"[red]{dataset_id} {backend_id} {condition.value}: {e.code}: {e}[/red]")

    table = report_table(reports, dataset_order=taxonomy.dataset_ids())
    out.mkdir(parents=True, exist_ok=True)
    (out / "table.csv").write_text(render_csv(table), encoding="utf-8")
    console.print(render_rich(table, title="Measured zero-shot accuracy (%)"))
    if with_reference:
        reference = report_table(load_reference_reports(DATA_DIR / "reference" / "accuracy.yaml"),
                                 dataset_order=taxonomy.dataset_ids())
        console.print(render_rich(reference, title="Reference zero-shot accuracy (%)"))


if __name__ == "__main__":
    reproduce()
