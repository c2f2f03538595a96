import pytest

from src.errors import ConfigError, UnknownDataset
from src.schemas.taxonomy import TaskCategoryId, normalize_label
from src.taxonomy import Taxonomy
from tests.conftest import write_taxonomy


def test_shipped_taxonomy_covers_twelve_datasets(shipped_taxonomy):
    assert len(shipped_taxonomy.dataset_ids()) == 12
    assert {c.id for c in shipped_taxonomy.categories()} == set(TaskCategoryId)
    assert shipped_taxonomy.datasets_in(TaskCategoryId.ACOUSTIC_SCENE) == ["Cochlscene", "USD8K", "ESC50", "TUT"]
    assert shipped_taxonomy.datasets_in(TaskCategoryId.MUSICAL_INSTRUMENTS) == [
        "BeijingOpera", "MridangamStroke", "MridangamTonic", "NSynthInstrument", "NSynthSource",
    ]


def test_display_text_is_normalized(shipped_taxonomy):
    assert shipped_taxonomy.display_text("ESC50", "sea_waves") == "sea waves"
    assert shipped_taxonomy.display_text("GTZAN", "hiphop") == "hip hop"
    assert shipped_taxonomy.display_text("Cochlscene", "Bus") == "bus"
    assert shipped_taxonomy.labels_of("SESA") == ["casual", "gunshot", "explosion", "siren"]


def test_normalize_label():
    assert normalize_label("  Street__Music ") == "street music"


def test_unknown_dataset_and_label(shipped_taxonomy):
    with pytest.raises(UnknownDataset):
        shipped_taxonomy.descriptor("AudioSet")
    with pytest.raises(UnknownDataset):
        shipped_taxonomy.display_text("ESC50", "unicorn")


def test_registry_keeps_shared_labels_per_dataset(shipped_taxonomy):
    sirens = [e for e in shipped_taxonomy.registry() if e.label_id == "siren"]
    assert {e.dataset_id for e in sirens} == {"ESC50", "USD8K", "SESA"}


def test_duplicate_label_is_reported_with_line(tmp_path):
    path = write_taxonomy(tmp_path / "taxonomy.yaml", [
        {"dataset_id": "Dup", "category": "MusicGenre", "manifest_path": "dup.csv", "labels": ["jazz", "jazz"]},
    ])
    with pytest.raises(ConfigError) as exc:
        Taxonomy.load(path)
    assert "duplicate label 'jazz'" in str(exc.value)
    assert f"{path}:" in str(exc.value)


def test_slot_markers_in_display_text_are_rejected(tmp_path):
    path = write_taxonomy(tmp_path / "taxonomy.yaml", [
        {"dataset_id": "Bad", "category": "MusicGenre", "manifest_path": "bad.csv",
         "labels": [{"id": "x", "display": "<label> music"}]},
    ])
    with pytest.raises(ConfigError, match="slot markers"):
        Taxonomy.load(path)


def test_missing_category_is_rejected(tmp_path):
    path = tmp_path / "taxonomy.yaml"
    path.write_text("categories: []\ndatasets: []\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="five task categories"):
        Taxonomy.load(path)
