import asyncio
import logging
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from src.errors import ConfigError, GenerationExhausted
from src.schemas.prompt import (
    AttributePool,
    CategoryPools,
    PoolFile,
    PoolHeader,
    SourcePool,
    validate_term,
)
from src.schemas.taxonomy import TaskCategory, TaskCategoryId
from src.utils.log import log_event
from src.utils.yaml_config import dump_yaml, load_yaml, validate_model

logger = logging.getLogger(__name__)

MAX_ROUNDS = 5
GLOBAL_ATTRIBUTE_POOL = "global-attributes"
GLOBAL_SOURCE_POOL = "global-sources"

TermKind = Literal["attribute", "source"]


async def _collect_terms(kind: TermKind, category_descriptions: List[str], count: int, backend,
                         max_rounds: int) -> List[str]:
    accepted: List[str] = []
    for round_index in range(max_rounds):
        need = count - len(accepted)
        if need <= 0:
            break
        proposed = await backend.propose_terms(kind, category_descriptions, need, list(accepted), round_index)
        dropped = 0
        for term in proposed:
            try:
                value = validate_term(term)
            except ValueError:
                dropped += 1
                continue
            if value in accepted:
                dropped += 1
                continue
            accepted.append(value)
            if len(accepted) == count:
                break
        log_event(logger, "pool_round", kind=kind, round=round_index, accepted=len(accepted), dropped=dropped,
                  level=logging.DEBUG)
    if len(accepted) < count:
        raise GenerationExhausted(
            f"only {len(accepted)} unique {kind}s after {max_rounds} rounds (needed {count})"
        )
    return accepted


async def generate_pools(category_descriptions: List[str], backend, attribute_count: int = 30,
                         source_count: int = 30, max_rounds: int = MAX_ROUNDS) -> Tuple[AttributePool, SourcePool]:
    """Ask the backend for the global attribute and source pools.

    Duplicates and malformed entries are dropped and re-requested until the
    pools are full or ``max_rounds`` is spent.
    """
    attributes, sources = await asyncio.gather(
        _collect_terms("attribute", category_descriptions, attribute_count, backend, max_rounds),
        _collect_terms("source", category_descriptions, source_count, backend, max_rounds),
    )
    log_event(logger, "pools_generated", backend=backend.name, attributes=len(attributes), sources=len(sources))
    return (
        AttributePool(pool_id=GLOBAL_ATTRIBUTE_POOL, attributes=attributes),
        SourcePool(pool_id=GLOBAL_SOURCE_POOL, sources=sources),
    )


def map_pools(attribute_pool: AttributePool, source_pool: SourcePool,
              mapping: Dict[TaskCategoryId, CategoryPools]) -> Dict[TaskCategoryId, CategoryPools]:
    """Validate a manual category mapping against the global pools."""
    normalized: Dict[TaskCategoryId, CategoryPools] = {}
    for category, pools in mapping.items():
        try:
            attributes = [validate_term(t) for t in pools.attributes]
            sources = [validate_term(t) for t in pools.sources]
        except ValueError as exc:
            raise ConfigError(f"category {TaskCategoryId(category).value}: {exc}") from exc
        stray = sorted(set(attributes) - set(attribute_pool.attributes)) + sorted(set(sources) - set(source_pool.sources))
        if stray:
            raise ConfigError(f"category {TaskCategoryId(category).value} maps terms missing from the global pools: {stray}")
        normalized[TaskCategoryId(category)] = CategoryPools(attributes=attributes, sources=sources)
    return normalized


def load_pool_file(path: Path) -> PoolFile:
    path = Path(path)
    pool_file = validate_model(PoolFile, load_yaml(path), path)
    try:
        attributes, sources = global_pools(pool_file)
        map_pools(attributes, sources, pool_file.categories)
    except (ConfigError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return pool_file


def global_pools(pool_file: PoolFile) -> Tuple[AttributePool, SourcePool]:
    return (
        AttributePool(pool_id=GLOBAL_ATTRIBUTE_POOL, attributes=pool_file.attributes),
        SourcePool(pool_id=GLOBAL_SOURCE_POOL, sources=pool_file.sources),
    )


def pools_for(category: TaskCategory, pool_file: PoolFile) -> Tuple[AttributePool, SourcePool]:
    """The category's pools, identified by the refs declared in the taxonomy."""
    try:
        mapped = pool_file.categories[category.id]
    except KeyError:
        raise ConfigError(f"no pools mapped to category {category.id.value}") from None
    return (
        AttributePool(pool_id=category.attribute_pool_ref, attributes=mapped.attributes),
        SourcePool(pool_id=category.source_pool_ref, sources=mapped.sources),
    )


def build_pool_file(attribute_pool: AttributePool, source_pool: SourcePool, provenance, seed: Optional[int] = None,
                    mapping: Optional[Dict[TaskCategoryId, CategoryPools]] = None) -> PoolFile:
    return PoolFile(
        header=PoolHeader(
            attribute_count=len(attribute_pool.attributes),
            source_count=len(source_pool.sources),
            provenance=provenance,
            seed=seed,
        ),
        attributes=attribute_pool.attributes,
        sources=source_pool.sources,
        categories=map_pools(attribute_pool, source_pool, mapping or {}),
    )


def save_pool_file(pool_file: PoolFile, path: Path) -> None:
    dump_yaml(pool_file.model_dump(mode="json"), path)
