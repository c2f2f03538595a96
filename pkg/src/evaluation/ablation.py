import csv
import logging
from pathlib import Path
from typing import List, Optional, Sequence

from src.config import Averaging
from src.curation.curate import curate
from src.encoder.service import EmbeddingService
from src.errors import InsufficientCandidates
from src.promptgen.articles import ArticleTable
from src.schemas.curation import CompatibilityRule, CurationMode
from src.schemas.evaluation import AblationPoint, AblationResult, Condition, DatasetManifest
from src.schemas.prompt import PromptCandidate
from src.taxonomy import Taxonomy
from src.utils.log import log_event

from .harness import evaluate

logger = logging.getLogger(__name__)

DEFAULT_KS = (5, 10, 15, 20, 25, 30)


def ablate_k(
    manifest: DatasetManifest,
    taxonomy: Taxonomy,
    service: EmbeddingService,
    candidates: List[PromptCandidate],
    rules: List[CompatibilityRule],
    ks: Sequence[int] = DEFAULT_KS,
    seed: int = 0,
    runs: int = 5,
    averaging: Averaging = "normalize_first",
    out_dir: Optional[Path] = None,
    articles: Optional[ArticleTable] = None,
) -> AblationResult:
    """Accuracy as a function of the ensemble size K.

    Each K keeps the first K candidates that pass the rules, so the prompt
    sets are nested prefixes of one another.
    """
    ks = list(ks)
    if not ks:
        raise ValueError("at least one K is required")
    if any(b <= a for a, b in zip(ks, ks[1:])) or ks[0] < 1:
        raise ValueError(f"K values must be positive and strictly increasing, got {ks}")
    if len(candidates) < ks[-1]:
        raise InsufficientCandidates(f"{len(candidates)} candidates cannot cover K={ks[-1]}")

    points = []
    for k in ks:
        promptset = curate(candidates, rules, K=k, mode=CurationMode.AUTO, reviewer="ablation")
        report = evaluate(manifest, taxonomy, service, Condition.TSPE, promptset=promptset, runs=runs,
                          seed=seed, averaging=averaging, articles=articles)
        points.append(AblationPoint(K=k, accuracy=report.accuracy))
        log_event(logger, "ablation_point", dataset=manifest.dataset_id, k=k, accuracy=f"{report.accuracy:.2f}")

    result = AblationResult(dataset_id=manifest.dataset_id, backend_id=service.backend.backend_id, points=points)
    if out_dir is not None:
        write_ablation(result, Path(out_dir))
    return result


def write_ablation(result: AblationResult, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "ablation.csv", "w", newline="", encoding="utf-8") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(["K", "accuracy"])
        for point in result.points:
            writer.writerow([point.K, f"{point.accuracy:.2f}"])
    (out_dir / "ablation.json").write_text(result.model_dump_json(indent=2) + "\n", encoding="utf-8")
