from dataclasses import dataclass
from pathlib import Path
from typing import List

import numpy as np
import pytest
import soundfile as sf

from src.config import DATA_DIR
from src.schemas.taxonomy import DatasetDescriptor, TaskCategoryId
from src.taxonomy import Taxonomy
from src.utils.yaml_config import dump_yaml

SAMPLE_RATE = 16000
SYNTHETIC_LABELS = ["dog", "siren", "rain", "engine", "church_bells"]


@dataclass
class SyntheticDataset:
    dataset_id: str
    taxonomy_path: Path
    taxonomy: Taxonomy
    manifest_path: Path
    root: Path
    labels: List[str]


@pytest.fixture(scope="session")
def shipped_taxonomy() -> Taxonomy:
    return Taxonomy.load(DATA_DIR / "taxonomy.yaml")


def write_taxonomy(path: Path, datasets: List[dict]) -> Path:
    """A taxonomy file with the shipped categories and the given datasets."""
    categories = Taxonomy.load(DATA_DIR / "taxonomy.yaml").config.categories
    dump_yaml(
        {"version": 1, "categories": [c.model_dump(mode="json") for c in categories], "datasets": datasets},
        path,
    )
    return path


def write_clip(path: Path, index: int, seconds: float = 0.1) -> None:
    rng = np.random.default_rng(index)
    t = np.arange(int(SAMPLE_RATE * seconds)) / SAMPLE_RATE
    samples = 0.3 * np.sin(2 * np.pi * (110 + 7 * index) * t) + 0.05 * rng.standard_normal(t.shape[0])
    path.parent.mkdir(parents=True, exist_ok=True)
    sf.write(str(path), samples.astype(np.float32), SAMPLE_RATE, subtype="FLOAT")


@pytest.fixture
def synthetic_dataset(tmp_path: Path) -> SyntheticDataset:
    """5 classes x 20 clips of distinct synthetic audio."""
    root = tmp_path / "audio"
    lines = ["clip_path,label"]
    index = 0
    for label in SYNTHETIC_LABELS:
        for take in range(20):
            clip = f"{label}/{label}_{take:02d}.wav"
            write_clip(root / clip, index)
            lines.append(f"{clip},{label}")
            index += 1
    manifest_path = tmp_path / "manifest.csv"
    manifest_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    descriptor = DatasetDescriptor(
        dataset_id="Synthetic",
        category=TaskCategoryId.ACOUSTIC_SCENE,
        manifest_path="manifest.csv",
        split="test",
        labels=SYNTHETIC_LABELS,
    )
    taxonomy_path = write_taxonomy(tmp_path / "taxonomy.yaml", [descriptor.model_dump(mode="json", exclude_none=True)])
    return SyntheticDataset(
        dataset_id="Synthetic",
        taxonomy_path=taxonomy_path,
        taxonomy=Taxonomy.load(taxonomy_path),
        manifest_path=manifest_path,
        root=root,
        labels=SYNTHETIC_LABELS,
    )
