import pytest

from src.config import load_settings
from src.evaluation import build_service, evaluate, load_manifest
from src.schemas.evaluation import Condition
from src.taxonomy import Taxonomy

pytestmark = pytest.mark.requires_network


def test_esc50_vanilla_matches_published_accuracy():
    pytest.importorskip("msclap")
    settings = load_settings()
    taxonomy = Taxonomy.load(settings.taxonomy_path)
    manifest_path = taxonomy.manifest_path("ESC50")
    root = settings.dataset_roots.get("ESC50")
    if root is None or not manifest_path.is_file():
        pytest.skip("ESC-50 is not prepared (run `tspe datasets prepare --dataset ESC50`)")

    manifest = load_manifest(manifest_path, "ESC50", taxonomy, root=root)
    service = build_service("msclap2023", settings, settings.seed, settings.cache_dir, settings.jobs)
    report = evaluate(manifest, taxonomy, service, Condition.VANILLA, runs=1)
    assert report.accuracy == pytest.approx(92.85, abs=2.0)
