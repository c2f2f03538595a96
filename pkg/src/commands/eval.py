import logging
from pathlib import Path
from typing import Optional

import click
from rich.table import Table

from src.config import RunConfig
from src.curation import load_rules
from src.encoder.registry import BACKENDS
from src.evaluation import DEFAULT_KS, ablate_k, build_service, load_manifest, run_evaluation
from src.promptgen.articles import load_articles
from src.promptgen.candidates import load_candidates
from src.schemas.evaluation import Condition
from src.utils.yaml_config import load_yaml, validate_model

from .common import EXISTING_FILE, PATH, CliState, parse_ks, pass_state, require_category

logger = logging.getLogger(__name__)

AVERAGING = click.Choice(["normalize_first", "raw_mean"])


def _default_out(dataset: str, backend: str, suffix: str) -> Path:
    return Path("runs") / f"{dataset}-{backend}-{suffix}"


@click.command("eval")
@click.option("--dataset", help="Dataset id from the taxonomy")
@click.option("--backend", type=click.Choice(BACKENDS), default="mock", show_default=True)
@click.option("--condition", type=click.Choice([c.value for c in Condition]), default="vanilla", show_default=True)
@click.option("--promptset", type=EXISTING_FILE, help="Curated prompt set (tspe condition)")
@click.option("--runs", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--manifest", "manifest_path", type=EXISTING_FILE, help="Manifest CSV (default: the taxonomy's)")
@click.option("--root", type=click.Path(exists=True, file_okay=False, path_type=Path), help="Dataset root")
@click.option("--averaging", type=AVERAGING, help="Prompt averaging (default: configured)")
@click.option("--out", type=PATH, help="Run directory (default: runs/<dataset>-<backend>-<condition>)")
@click.option("--from-config", "from_config", type=EXISTING_FILE, help="Re-run from a run directory's config.yaml")
@pass_state
def eval_command(state: CliState, dataset: Optional[str], backend: str, condition: str, promptset: Optional[Path],
                 runs: int, manifest_path: Optional[Path], root: Optional[Path], averaging: Optional[str],
                 out: Optional[Path], from_config: Optional[Path]):
    """Zero-shot accuracy of one dataset under the vanilla or tspe condition."""
    if from_config is not None:
        run_config = validate_model(RunConfig, load_yaml(from_config), from_config)
        if out is not None:
            run_config = run_config.model_copy(update={"out_dir": out})
    else:
        if dataset is None:
            raise click.UsageError("--dataset is required unless --from-config is given")
        settings = state.settings
        taxonomy = state.taxonomy()
        manifest_path = manifest_path or taxonomy.manifest_path(dataset)
        run_config = RunConfig(
            dataset_id=dataset,
            backend_id=backend,
            condition=condition,
            runs=runs,
            seed=settings.seed,
            taxonomy_path=settings.taxonomy_path,
            manifest_path=manifest_path,
            dataset_root=state.dataset_root(dataset, root, manifest_path),
            out_dir=out or _default_out(dataset, backend, condition),
            cache_dir=settings.cache_dir,
            promptset_path=promptset,
            articles_path=settings.articles_path,
            averaging=averaging or settings.averaging,
            jobs=state.jobs(),
        )

    report = run_evaluation(run_config, state.settings, progress=True)
    runs_note = "identical runs" if report.identical_runs else "runs differ"
    state.console.print(
        f"{report.dataset_id} {report.backend_id} {report.condition.value}: "
        f"[bold]{report.accuracy:.2f}%[/bold] over {report.runs} runs ({runs_note}), "
        f"report in {run_config.out_dir}"
    )


@click.command("ablate")
@click.option("--dataset", required=True, help="Dataset id from the taxonomy")
@click.option("--backend", type=click.Choice(BACKENDS), default="mock", show_default=True)
@click.option("--ks", default=",".join(str(k) for k in DEFAULT_KS), show_default=True, help="Comma-separated K values")
@click.option("--candidates", "candidates_path", type=EXISTING_FILE,
              help="Candidate file (default: <data_dir>/candidates/<category>.jsonl)")
@click.option("--rules", "rules_path", type=EXISTING_FILE, help="Rule table (default: configured rules_path)")
@click.option("--runs", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--manifest", "manifest_path", type=EXISTING_FILE, help="Manifest CSV (default: the taxonomy's)")
@click.option("--root", type=click.Path(exists=True, file_okay=False, path_type=Path), help="Dataset root")
@click.option("--out", type=PATH, help="Output directory (default: runs/<dataset>-<backend>-ablation)")
@pass_state
def ablate_command(state: CliState, dataset: str, backend: str, ks: str, candidates_path: Optional[Path],
                   rules_path: Optional[Path], runs: int, manifest_path: Optional[Path], root: Optional[Path],
                   out: Optional[Path]):
    """Sweep the ensemble size K with nested auto-curated prompt sets."""
    k_values = parse_ks(ks)
    settings = state.settings
    taxonomy = state.taxonomy()
    category = taxonomy.descriptor(dataset).category
    manifest_path = manifest_path or taxonomy.manifest_path(dataset)
    manifest = load_manifest(manifest_path, dataset, taxonomy, root=state.dataset_root(dataset, root, manifest_path))
    candidates_path = candidates_path or state.candidates_path(category)
    candidates = load_candidates(candidates_path)
    require_category(candidates, category, candidates_path)
    service = build_service(backend, settings, settings.seed, settings.cache_dir, state.jobs())

    result = ablate_k(
        manifest,
        taxonomy,
        service,
        candidates,
        load_rules(rules_path or settings.rules_path),
        ks=k_values,
        seed=settings.seed,
        runs=runs,
        averaging=settings.averaging,
        out_dir=out or _default_out(dataset, backend, "ablation"),
        articles=load_articles(settings.articles_path),
    )
    table = Table(title=f"{dataset} / {backend}: accuracy vs K")
    table.add_column("K", justify="right")
    table.add_column("accuracy (%)", justify="right")
    for point in result.points:
        table.add_row(str(point.K), f"{point.accuracy:.2f}")
    state.console.print(table)
