import os
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import click
from rich.console import Console

from src.config import Settings
from src.errors import ConfigError
from src.schemas.taxonomy import TaskCategoryId
from src.taxonomy import Taxonomy


@dataclass
class CliState:
    """Per-invocation state shared by every command."""
    settings: Settings
    console: Console
    verbose: bool = False

    def taxonomy(self) -> Taxonomy:
        return Taxonomy.load(self.settings.taxonomy_path)

    def jobs(self) -> int:
        return self.settings.jobs or os.cpu_count() or 1

    def candidates_path(self, category: TaskCategoryId) -> Path:
        return self.settings.data_dir / "candidates" / f"{category.value}.jsonl"

    def promptset_path(self, category: TaskCategoryId) -> Path:
        return self.settings.data_dir / "promptsets" / f"{category.value}.json"

    def dataset_root(self, dataset_id: str, explicit: Optional[Path], manifest_path: Path) -> Path:
        if explicit is not None:
            return explicit
        return self.settings.dataset_roots.get(dataset_id, manifest_path.parent)


pass_state = click.make_pass_decorator(CliState)

CATEGORY_CHOICE = click.Choice([c.value for c in TaskCategoryId])
PATH = click.Path(path_type=Path)
EXISTING_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


def parse_ks(value: str) -> List[int]:
    """Comma-separated K values; positive and strictly increasing."""
    try:
        ks = [int(k) for k in value.split(",") if k.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{value}'", param_hint="--ks") from None
    if not ks:
        raise click.BadParameter("at least one K is required", param_hint="--ks")
    if ks[0] < 1 or any(b <= a for a, b in zip(ks, ks[1:])):
        raise click.BadParameter(f"K values must be positive and strictly increasing, got {ks}", param_hint="--ks")
    return ks


def require_category(candidates, category: TaskCategoryId, path: Path) -> None:
    foreign = {c.category for c in candidates} - {category}
    if foreign:
        raise ConfigError(f"{path} holds candidates of {sorted(c.value for c in foreign)}, not {category.value}")
