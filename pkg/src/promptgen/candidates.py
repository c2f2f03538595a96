import asyncio
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from src.errors import ConfigError, GenerationExhausted
from src.schemas.prompt import AttributePool, GenerationReport, PromptCandidate, SourcePool
from src.schemas.taxonomy import TaskCategory, TaskCategoryId
from src.utils.log import log_event

from .articles import ArticleTable
from .grammar import candidate_from_line

logger = logging.getLogger(__name__)

MAX_ROUNDS = 5


async def generate_candidates_with_report(
    category: TaskCategory,
    pools: Tuple[AttributePool, SourcePool],
    backend,
    n: int = 40,
    max_rounds: int = MAX_ROUNDS,
    articles: Optional[ArticleTable] = None,
) -> Tuple[List[PromptCandidate], GenerationReport]:
    if n < 1:
        raise ValueError("n must be >= 1")
    attribute_pool, source_pool = pools
    allowed_attributes = set(attribute_pool.attributes)
    allowed_sources = set(source_pool.sources)
    report = GenerationReport(category=category.id, backend=backend.name, requested=n)
    accepted: List[PromptCandidate] = []
    seen = set()

    for round_index in range(max_rounds):
        need = n - len(accepted)
        if need <= 0:
            break
        report.rounds += 1
        lines = await backend.propose_prompts(
            category, attribute_pool.attributes, source_pool.sources, need,
            [c.pattern for c in accepted], round_index,
        )
        for line in lines:
            if not line.strip():
                continue
            candidate = candidate_from_line(line, category.id, backend.provenance, articles)
            if candidate is None:
                report.rejected_unparseable += 1
                continue
            if (candidate.attribute is not None and candidate.attribute not in allowed_attributes) or (
                candidate.source is not None and candidate.source not in allowed_sources
            ):
                report.rejected_pool += 1
                continue
            if candidate.key() in seen:
                report.duplicates += 1
                continue
            seen.add(candidate.key())
            accepted.append(candidate)
            if len(accepted) == n:
                break

    report.accepted = len(accepted)
    log_event(logger, "candidates_generated", **report.model_dump(mode="json"))
    if len(accepted) < n:
        raise GenerationExhausted(
            f"{category.id.value}: {len(accepted)} valid candidates after {report.rounds} rounds (needed {n})"
        )
    return accepted, report


async def generate_candidates(
    category: TaskCategory,
    pools: Tuple[AttributePool, SourcePool],
    backend,
    n: int = 40,
    max_rounds: int = MAX_ROUNDS,
    articles: Optional[ArticleTable] = None,
) -> List[PromptCandidate]:
    """Exactly ``n`` grammar-valid, pool-consistent candidates for the category."""
    candidates, _ = await generate_candidates_with_report(category, pools, backend, n=n, max_rounds=max_rounds,
                                                          articles=articles)
    return candidates


async def generate_for_categories(
    requests: Dict[TaskCategoryId, Tuple[TaskCategory, Tuple[AttributePool, SourcePool]]],
    backend,
    n: int = 40,
    articles: Optional[ArticleTable] = None,
) -> Dict[TaskCategoryId, Tuple[List[PromptCandidate], GenerationReport]]:
    """Run one generation per category concurrently."""
    ids = list(requests)
    results = await asyncio.gather(
        *(generate_candidates_with_report(requests[i][0], requests[i][1], backend, n=n, articles=articles)
          for i in ids)
    )
    return dict(zip(ids, results))


def save_candidates(candidates: List[PromptCandidate], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        for candidate in candidates:
            fp.write(candidate.model_dump_json() + "\n")


def load_candidates(path: Path) -> List[PromptCandidate]:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read candidate file: {exc}") from exc
    candidates = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            candidates.append(PromptCandidate.model_validate_json(line))
        except ValidationError as exc:
            error = exc.errors()[0]
            field = ".".join(str(p) for p in error.get("loc", ())) or "<record>"
            raise ConfigError(f"{path}:{number}: field '{field}': {error.get('msg')}") from exc
    return candidates


def save_report(report: GenerationReport, path: Path) -> None:
    Path(path).write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
