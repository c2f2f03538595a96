import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from tqdm import tqdm

from src.config import Averaging, RunConfig, Settings
from src.curation.store import load_promptset
from src.encoder.audio import load_audio
from src.encoder.cache import EmbeddingCache
from src.encoder.registry import create_backend
from src.encoder.service import EmbeddingService
from src.ensemble.core import build_ensembles, classify, vanilla_ensembles
from src.errors import CategoryMismatch, ConfigError, EncodeError
from src.promptgen.articles import ArticleTable, load_articles
from src.schemas.curation import PromptSet
from src.schemas.embedding import Modality
from src.schemas.evaluation import ClipPrediction, Condition, DatasetManifest, EvaluationReport
from src.taxonomy import Taxonomy
from src.utils.log import log_event

from .manifest import load_manifest
from .rundir import RunDirectory

logger = logging.getLogger(__name__)

AUDIO_CHUNK = 64


def _labels(taxonomy: Taxonomy, dataset_id: str) -> List[Tuple[str, str]]:
    return [(label_id, taxonomy.display_text(dataset_id, label_id)) for label_id in taxonomy.labels_of(dataset_id)]


def _plant(service: EmbeddingService, manifest: DatasetManifest, labels: List[Tuple[str, str]]) -> None:
    backend = service.backend
    index = {label_id: i for i, (label_id, _) in enumerate(labels)}
    clips = [
        (load_audio(manifest.resolve(row.clip_path), backend.sample_rate), index[row.label_id])
        for row in manifest.rows
    ]
    backend.plant([text for _, text in labels], clips)


def _predict(service: EmbeddingService, manifest: DatasetManifest, ensembles, run_index: int,
             progress: bool) -> List[ClipPrediction]:
    paths = manifest.clip_paths()
    predictions: List[ClipPrediction] = []
    bar = tqdm(
        total=len(paths),
        desc=f"{manifest.dataset_id} run {run_index}",
        unit="clip",
        disable=not (progress and sys.stderr.isatty()),
    )
    with bar:
        for start in range(0, len(paths), AUDIO_CHUNK):
            rows = manifest.rows[start:start + AUDIO_CHUNK]
            embeddings = service.embed_audio(paths[start:start + AUDIO_CHUNK])
            for row, embedding in zip(rows, embeddings):
                predicted, scores = classify(embedding, ensembles)
                top = max(s.cosine for s in scores.scores)
                predictions.append(
                    ClipPrediction(clip=row.clip_path, gold=row.label_id, predicted=predicted, top_cosine=top)
                )
                log_event(logger, "clip_predicted", clip=row.clip_path, gold=row.label_id, predicted=predicted,
                          cosine=f"{top:.6f}", level=logging.DEBUG)
            bar.update(len(rows))
    return predictions


def evaluate(
    manifest: DatasetManifest,
    taxonomy: Taxonomy,
    service: EmbeddingService,
    condition: Condition,
    promptset: Optional[PromptSet] = None,
    runs: int = 5,
    seed: int = 0,
    averaging: Averaging = "normalize_first",
    run_dir: Optional[RunDirectory] = None,
    progress: bool = False,
    articles: Optional[ArticleTable] = None,
) -> EvaluationReport:
    """Zero-shot accuracy of one dataset under the vanilla or the ensembled condition.

    Runs differ only through backends that declare ``seed_sensitive``; each
    such run reseeds the backend with ``seed + run``. Deterministic backends
    are evaluated once and the result is reported for every run.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    condition = Condition(condition)
    descriptor = taxonomy.descriptor(manifest.dataset_id)
    if condition == Condition.TSPE:
        if promptset is None:
            raise CategoryMismatch(
                f"the tspe condition needs a prompt set for category {descriptor.category.value}"
            )
        if promptset.category != descriptor.category:
            raise CategoryMismatch(
                f"prompt set is for {promptset.category.value}, "
                f"dataset {manifest.dataset_id} belongs to {descriptor.category.value}"
            )
    backend = service.backend
    missing = {Modality.TEXT, Modality.AUDIO} - set(backend.capabilities)
    if missing:
        raise EncodeError(f"backend {backend.backend_id} lacks {sorted(m.value for m in missing)} capability")

    labels = _labels(taxonomy, manifest.dataset_id)
    if getattr(backend, "planted", False):
        _plant(service, manifest, labels)

    per_run: List[List[ClipPrediction]] = []
    for run_index in range(runs):
        if per_run and not backend.seed_sensitive:
            per_run.append(per_run[0])
        else:
            if backend.seed_sensitive:
                backend.reseed(seed + run_index)
            if condition == Condition.TSPE:
                ensembles = build_ensembles(promptset, labels, service, averaging, articles)
            else:
                ensembles = vanilla_ensembles(labels, service, averaging, articles)
            per_run.append(_predict(service, manifest, ensembles, run_index, progress))
        if run_dir is not None:
            run_dir.write_predictions(run_index, per_run[-1])

    n_clips = len(manifest.rows)
    accuracies = [100.0 * sum(p.correct for p in predictions) / n_clips for predictions in per_run]
    report = EvaluationReport(
        dataset_id=manifest.dataset_id,
        category=descriptor.category,
        split=manifest.split,
        backend_id=backend.backend_id,
        condition=condition,
        n_clips=n_clips,
        runs=runs,
        per_run_accuracies=accuracies,
        promptset_hash=promptset.fingerprint() if condition == Condition.TSPE else None,
        seed=seed,
        identical_runs=all(
            [p.predicted for p in predictions] == [p.predicted for p in per_run[0]] for predictions in per_run
        ),
        averaging=averaging,
    )
    log_event(logger, "evaluated", dataset=report.dataset_id, backend=report.backend_id,
              condition=condition.value, accuracy=f"{report.accuracy:.2f}", runs=runs, clips=n_clips)
    if run_dir is not None:
        run_dir.write_report(report)
    return report


def build_service(backend_id: str, settings: Settings, seed: int, cache_dir: Optional[Path],
                  jobs: Optional[int]) -> EmbeddingService:
    backend = create_backend(backend_id, settings, seed=seed)
    namespace = backend.cache_namespace()
    cache = EmbeddingCache(cache_dir, namespace, backend.dimension) if cache_dir and namespace else None
    return EmbeddingService(backend, cache=cache, jobs=jobs)


def run_evaluation(run_config: RunConfig, settings: Settings, progress: bool = False) -> EvaluationReport:
    """Evaluate from a validated run snapshot and fill its run directory."""
    run_config.validate_paths()
    taxonomy = Taxonomy.load(run_config.taxonomy_path)
    if run_config.condition == Condition.TSPE.value and run_config.promptset_path is None:
        category = taxonomy.descriptor(run_config.dataset_id).category
        raise CategoryMismatch(f"the tspe condition needs a prompt set for category {category.value}")
    manifest = load_manifest(run_config.manifest_path, run_config.dataset_id, taxonomy, root=run_config.dataset_root)
    promptset = None
    if run_config.promptset_path is not None:
        promptset = load_promptset(run_config.promptset_path)
        if run_config.promptset_hash and promptset.fingerprint() != run_config.promptset_hash:
            raise ConfigError(
                f"prompt set {run_config.promptset_path} changed since the snapshot "
                f"(fingerprint {promptset.fingerprint()}, expected {run_config.promptset_hash})"
            )
    articles = load_articles(run_config.articles_path or settings.articles_path)
    service = build_service(run_config.backend_id, settings, run_config.seed, run_config.cache_dir, run_config.jobs)

    with RunDirectory(run_config.out_dir) as run_dir:
        snapshot = run_config.model_copy(update={
            "promptset_hash": promptset.fingerprint() if promptset is not None else None,
            "backend_config": service.backend.describe().model_dump(mode="json"),
        })
        run_dir.write_config(snapshot)
        run_dir.copy_manifest(run_config.manifest_path)
        return evaluate(
            manifest,
            taxonomy,
            service,
            Condition(run_config.condition),
            promptset=promptset,
            runs=run_config.runs,
            seed=run_config.seed,
            averaging=run_config.averaging,
            run_dir=run_dir,
            progress=progress,
            articles=articles,
        )
