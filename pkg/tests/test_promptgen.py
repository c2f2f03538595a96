import asyncio
from collections import Counter

import pytest

from src.agent import OfflineGenerator, get_generator
from src.agent.base import GeneratorBackend
from src.agent.offline import SEED_ATTRIBUTES, SEED_SOURCES
from src.config import DATA_DIR, Settings
from src.errors import ConfigError, GenerationExhausted
from src.promptgen import generate_candidates, generate_pools, load_candidates, load_pool_file, map_pools, pools_for
from src.promptgen.articles import ArticleTable
from src.promptgen.candidates import generate_candidates_with_report, generate_for_categories
from src.promptgen.grammar import GENERATED_GRAMMARS, parse
from src.promptgen.pools import global_pools
from src.schemas.prompt import LABEL_SLOT, CategoryPools, Provenance
from src.schemas.taxonomy import TaskCategoryId

POOLS = DATA_DIR / "pools.yaml"
DESCRIPTIONS = ["Musical instruments", "Acoustic scenes", "Music genres", "Impact sounds", "Vocal sounds"]


class SilentGenerator(GeneratorBackend):
    name = "silent"
    provenance = Provenance.LLM

    async def propose_terms(self, kind, category_descriptions, count, exclude, round_index):
        return ["loud", "LOUD", "two words here too", "Loud"]

    async def propose_prompts(self, category, attributes, sources, count, exclude, round_index):
        return ["not a prompt"]


@pytest.fixture(scope="module")
def pool_file():
    return load_pool_file(POOLS)


def test_offline_pools_start_with_seed_examples():
    attributes, sources = asyncio.run(generate_pools(DESCRIPTIONS, OfflineGenerator(seed=7)))
    assert len(attributes.attributes) == 30 and len(set(attributes.attributes)) == 30
    assert len(sources.sources) == 30 and len(set(sources.sources)) == 30
    assert attributes.attributes[:5] == SEED_ATTRIBUTES
    assert sources.sources[:6] == SEED_SOURCES


def test_offline_pools_are_seed_deterministic():
    first = asyncio.run(generate_pools(DESCRIPTIONS, OfflineGenerator(seed=3)))
    again = asyncio.run(generate_pools(DESCRIPTIONS, OfflineGenerator(seed=3)))
    other = asyncio.run(generate_pools(DESCRIPTIONS, OfflineGenerator(seed=4)))
    assert first == again
    assert first[0].attributes != other[0].attributes


def test_pool_generation_gives_up_after_retry_cap():
    with pytest.raises(GenerationExhausted):
        asyncio.run(generate_pools(DESCRIPTIONS, SilentGenerator(), attribute_count=3, source_count=3))


@pytest.mark.parametrize("category_id", list(TaskCategoryId))
def test_offline_candidates_respect_grammar_and_pools(shipped_taxonomy, pool_file, category_id):
    category = shipped_taxonomy.category(category_id)
    pools = pools_for(category, pool_file)
    candidates = asyncio.run(generate_candidates(category, pools, OfflineGenerator(seed=0), n=40))

    assert len(candidates) == 40
    assert len({c.key() for c in candidates}) == 40
    assert {c.grammar_id for c in candidates} == set(GENERATED_GRAMMARS)
    for candidate in candidates:
        assert candidate.category == category_id
        assert candidate.provenance == Provenance.OFFLINE
        parsed = parse(candidate.pattern, label_text=LABEL_SLOT)
        assert parsed is not None and parsed.grammar_id == candidate.grammar_id
        assert candidate.attribute is None or candidate.attribute in pools[0].attributes
        assert candidate.source is None or candidate.source in pools[1].sources


def test_first_draws_are_stratified_across_grammars(shipped_taxonomy, pool_file):
    category = shipped_taxonomy.category(TaskCategoryId.ACOUSTIC_SCENE)
    candidates = asyncio.run(
        generate_candidates(category, pools_for(category, pool_file), OfflineGenerator(seed=11), n=12)
    )
    for block in range(0, 12, 3):
        assert {c.grammar_id for c in candidates[block:block + 3]} == set(GENERATED_GRAMMARS)


def test_unparseable_lines_exhaust_generation(shipped_taxonomy, pool_file):
    category = shipped_taxonomy.category(TaskCategoryId.MUSIC_GENRE)
    with pytest.raises(GenerationExhausted):
        asyncio.run(generate_candidates_with_report(category, pools_for(category, pool_file), SilentGenerator(), n=2))


def test_generate_for_categories_runs_every_request(shipped_taxonomy, pool_file):
    requests = {
        c.id: (c, pools_for(c, pool_file)) for c in shipped_taxonomy.categories()
    }
    results = asyncio.run(generate_for_categories(requests, OfflineGenerator(seed=0), n=10))
    assert set(results) == set(TaskCategoryId)
    for candidates, report in results.values():
        assert len(candidates) == report.accepted == 10


def test_shipped_pool_file(pool_file):
    attributes, sources = global_pools(pool_file)
    assert len(attributes.attributes) == pool_file.header.attribute_count == 30
    assert len(sources.sources) == pool_file.header.source_count == 30
    assert set(pool_file.categories) == set(TaskCategoryId)


def test_map_pools_rejects_terms_outside_the_global_pools(pool_file):
    attributes, sources = global_pools(pool_file)
    with pytest.raises(ConfigError, match="missing from the global pools"):
        map_pools(attributes, sources, {
            TaskCategoryId.MUSIC_GENRE: CategoryPools(attributes=["groovy"], sources=["room"]),
        })


@pytest.mark.parametrize("category_id", list(TaskCategoryId))
def test_shipped_candidates(shipped_taxonomy, pool_file, category_id):
    candidates = load_candidates(DATA_DIR / "candidates" / f"{category_id.value}.jsonl")
    attributes, sources = pools_for(shipped_taxonomy.category(category_id), pool_file)
    assert len(candidates) == 40
    assert Counter(c.category for c in candidates) == {category_id: 40}
    for candidate in candidates:
        parsed = parse(candidate.pattern, label_text=LABEL_SLOT)
        assert parsed is not None and parsed.grammar_id == candidate.grammar_id
        assert (parsed.attribute, parsed.source) == (candidate.attribute, candidate.source)
        assert candidate.attribute is None or candidate.attribute in attributes.attributes
        assert candidate.source is None or candidate.source in sources.sources


def test_load_candidates_reports_the_bad_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    good = load_candidates(DATA_DIR / "candidates" / "MusicGenre.jsonl")[0]
    path.write_text(good.model_dump_json() + "\n" + '{"category": "MusicGenre"}\n', encoding="utf-8")
    with pytest.raises(ConfigError, match=r"bad.jsonl:2:"):
        load_candidates(path)


def test_unknown_generator_name():
    with pytest.raises(ConfigError):
        get_generator("telepathy", Settings())
    assert isinstance(get_generator("offline", Settings(seed=5)), OfflineGenerator)


def test_offline_generator_reads_the_configured_articles(tmp_path):
    path = tmp_path / "articles.yaml"
    path.write_text("a: [hour]\nan: []\nnone: []\n", encoding="utf-8")
    generator = get_generator("offline", Settings(articles_path=path))
    assert generator.articles == ArticleTable.load(path)
    assert generator.articles.article_for("hour") == "a"
