from .articles import ArticleTable, load_articles
from .candidates import (
    generate_candidates,
    generate_candidates_with_report,
    generate_for_categories,
    load_candidates,
    save_candidates,
)
from .grammar import (
    GENERATED_GRAMMARS,
    SURFACES,
    TEMPLATES,
    ParsedPrompt,
    bind,
    extract_label,
    parse,
    render,
    vanilla_candidate,
    vanilla_prompt,
)
from .pools import generate_pools, load_pool_file, map_pools, pools_for, save_pool_file

__all__ = [
    "ArticleTable",
    "load_articles",
    "generate_candidates",
    "generate_candidates_with_report",
    "generate_for_categories",
    "load_candidates",
    "save_candidates",
    "GENERATED_GRAMMARS",
    "SURFACES",
    "TEMPLATES",
    "ParsedPrompt",
    "bind",
    "extract_label",
    "parse",
    "render",
    "vanilla_candidate",
    "vanilla_prompt",
    "generate_pools",
    "load_pool_file",
    "map_pools",
    "pools_for",
    "save_pool_file",
]
