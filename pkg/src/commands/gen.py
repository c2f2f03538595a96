import asyncio
import logging
from pathlib import Path
from typing import Optional

import click
from rich.table import Table

from src.agent import GENERATORS, get_generator
from src.promptgen.articles import load_articles
from src.promptgen.candidates import generate_for_categories, save_candidates, save_report
from src.promptgen.pools import (
    build_pool_file,
    generate_pools,
    load_pool_file,
    pools_for,
    save_pool_file,
)
from src.schemas.prompt import CategoryPools, Provenance
from src.schemas.taxonomy import TaskCategoryId
from src.utils.log import log_event

from .common import CATEGORY_CHOICE, EXISTING_FILE, PATH, CliState, pass_state

logger = logging.getLogger(__name__)


@click.group("gen")
def gen():
    """Generate attribute/source pools and prompt candidates."""


@gen.command("pools")
@click.option("--backend", "generator", type=click.Choice(GENERATORS), default="offline", show_default=True)
@click.option("--attributes", "attribute_count", type=click.IntRange(min=1), default=30, show_default=True)
@click.option("--sources", "source_count", type=click.IntRange(min=1), default=30, show_default=True)
@click.option("--mapping", type=EXISTING_FILE, help="Pool file whose category mapping is carried over")
@click.option("--out", type=PATH, help="Output pool file (default: configured pools_path)")
@pass_state
def pools(state: CliState, generator: str, attribute_count: int, source_count: int,
          mapping: Optional[Path], out: Optional[Path]):
    """Generate the global attribute and source pools."""
    taxonomy = state.taxonomy()
    backend = get_generator(generator, state.settings)
    descriptions = [f"{c.name}: {c.description}" for c in taxonomy.categories()]
    attribute_pool, source_pool = asyncio.run(
        generate_pools(descriptions, backend, attribute_count=attribute_count, source_count=source_count)
    )

    if mapping is not None:
        previous = load_pool_file(mapping).categories
        category_pools = {
            category: CategoryPools(
                attributes=[t for t in pools.attributes if t in attribute_pool.attributes],
                sources=[t for t in pools.sources if t in source_pool.sources],
            )
            for category, pools in previous.items()
        }
    else:
        # without a manual mapping every category sees the whole pool
        category_pools = {
            c.id: CategoryPools(attributes=attribute_pool.attributes, sources=source_pool.sources)
            for c in taxonomy.categories()
        }

    pool_file = build_pool_file(
        attribute_pool,
        source_pool,
        provenance=backend.provenance,
        seed=state.settings.seed if backend.provenance == Provenance.OFFLINE else None,
        mapping=category_pools,
    )
    target = out or state.settings.pools_path
    save_pool_file(pool_file, target)
    state.console.print(
        f"wrote {len(attribute_pool.attributes)} attributes and {len(source_pool.sources)} sources to {target}"
    )


@gen.command("prompts")
@click.option("--category", type=click.Choice([*CATEGORY_CHOICE.choices, "all"]), required=True)
@click.option("--n", "count", type=click.IntRange(min=1), default=40, show_default=True)
@click.option("--backend", "generator", type=click.Choice(GENERATORS), default="offline", show_default=True)
@click.option("--pools", "pools_path", type=EXISTING_FILE, help="Pool file (default: configured pools_path)")
@click.option("--out", "out_dir", type=PATH, help="Output directory (default: <data_dir>/candidates)")
@pass_state
def prompts(state: CliState, category: str, count: int, generator: str, pools_path: Optional[Path],
            out_dir: Optional[Path]):
    """Generate prompt candidates for one or all task categories."""
    taxonomy = state.taxonomy()
    pool_file = load_pool_file(pools_path or state.settings.pools_path)
    backend = get_generator(generator, state.settings)
    ids = list(TaskCategoryId) if category == "all" else [TaskCategoryId(category)]
    requests = {
        category_id: (taxonomy.category(category_id), pools_for(taxonomy.category(category_id), pool_file))
        for category_id in ids
    }
    results = asyncio.run(
        generate_for_categories(requests, backend, n=count, articles=load_articles(state.settings.articles_path))
    )

    out_dir = out_dir or state.settings.data_dir / "candidates"
    table = Table(title=f"Candidates ({backend.name})")
    for column in ("category", "accepted", "unparseable", "off-pool", "duplicates", "rounds"):
        table.add_column(column, justify="left" if column == "category" else "right")
    for category_id, (candidates, report) in results.items():
        save_candidates(candidates, out_dir / f"{category_id.value}.jsonl")
        save_report(report, out_dir / f"{category_id.value}.report.json")
        table.add_row(category_id.value, str(report.accepted), str(report.rejected_unparseable),
                      str(report.rejected_pool), str(report.duplicates), str(report.rounds))
        log_event(logger, "candidates_written", category=category_id.value, count=len(candidates), out=out_dir)
    state.console.print(table)
