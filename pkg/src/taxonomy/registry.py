import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional

from src.errors import ConfigError, UnknownDataset
from src.schemas.taxonomy import (
    DatasetDescriptor,
    LabelEntry,
    TaskCategory,
    TaskCategoryId,
    TaxonomyConfig,
)
from src.utils.log import log_event
from src.utils.yaml_config import line_of, load_yaml, validate_model

logger = logging.getLogger(__name__)


class Taxonomy:
    """Read-only view over the taxonomy configuration.

    Built once (single-threaded); every accessor afterwards is a pure lookup,
    so instances can be shared across threads.
    """

    def __init__(self, config: TaxonomyConfig, base_dir: Optional[Path] = None):
        self.config = config
        self.base_dir = Path(base_dir) if base_dir is not None else Path.cwd()
        self._categories: Dict[TaskCategoryId, TaskCategory] = {c.id: c for c in config.categories}
        self._datasets: Dict[str, DatasetDescriptor] = {d.dataset_id: d for d in config.datasets}
        self._entries: Dict[str, Dict[str, LabelEntry]] = {
            d.dataset_id: {e.label_id: e for e in d.entries()} for d in config.datasets
        }

    @classmethod
    def load(cls, path: Path) -> "Taxonomy":
        path = Path(path)
        raw = load_yaml(path)
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}:1: top level must be a mapping with 'categories' and 'datasets'")
        config = validate_model(TaxonomyConfig, raw, path)
        _check_label_text(config, raw, path)
        taxonomy = cls(config, base_dir=path.parent)
        log_event(logger, "taxonomy_loaded", path=path, datasets=len(config.datasets))
        return taxonomy

    def categories(self) -> List[TaskCategory]:
        return list(self._categories.values())

    def category(self, category_id: TaskCategoryId) -> TaskCategory:
        return self._categories[TaskCategoryId(category_id)]

    def dataset_ids(self) -> List[str]:
        return list(self._datasets)

    def descriptor(self, dataset_id: str) -> DatasetDescriptor:
        try:
            return self._datasets[dataset_id]
        except KeyError:
            raise UnknownDataset(f"dataset '{dataset_id}' is not registered in the taxonomy") from None

    def category_of(self, dataset_id: str) -> TaskCategory:
        return self._categories[self.descriptor(dataset_id).category]

    def labels_of(self, dataset_id: str) -> List[str]:
        """Ordered label ids; the order is the tie-breaking order downstream."""
        return list(self.descriptor(dataset_id).class_labels)

    def display_text(self, dataset_id: str, label_id: str) -> str:
        entries = self._entries[self.descriptor(dataset_id).dataset_id]
        try:
            return entries[label_id].display_text
        except KeyError:
            raise UnknownDataset(f"label '{label_id}' is not registered for dataset '{dataset_id}'") from None

    def display_texts(self, dataset_id: str) -> List[str]:
        return [self.display_text(dataset_id, label_id) for label_id in self.labels_of(dataset_id)]

    def datasets_in(self, category_id: TaskCategoryId) -> List[str]:
        category_id = TaskCategoryId(category_id)
        return [d.dataset_id for d in self.config.datasets if d.category == category_id]

    def registry(self) -> List[LabelEntry]:
        """The flat label registry; a label shared by two datasets appears twice."""
        return [entry for entries in self._entries.values() for entry in entries.values()]

    def manifest_path(self, dataset_id: str) -> Path:
        path = Path(self.descriptor(dataset_id).manifest_path)
        return path if path.is_absolute() else self.base_dir / path


def _check_label_text(config: TaxonomyConfig, raw: dict, path: Path) -> None:
    # LabelEntry validation runs lazily in entries(); surface it at load time with a line number
    raw_datasets = raw.get("datasets") or []
    for index, descriptor in enumerate(config.datasets):
        try:
            descriptor.entries()
        except ValueError as exc:
            line = line_of(raw_datasets[index]) if index < len(raw_datasets) else None
            where = f"{path}:{line}" if line else str(path)
            raise ConfigError(f"{where}: field 'datasets.{index}.labels': {exc}") from exc


@lru_cache(maxsize=8)
def load_taxonomy(path: Path) -> Taxonomy:
    return Taxonomy.load(path)
