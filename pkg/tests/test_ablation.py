import pytest

from src.config import DATA_DIR
from src.curation import load_rules
from src.encoder import EmbeddingService
from src.errors import InsufficientCandidates
from src.evaluation import DEFAULT_KS, ablate_k, evaluate, load_manifest
from src.models.mock import MockBackend
from src.promptgen import load_candidates
from src.schemas.curation import PromptSet
from src.schemas.evaluation import Condition


@pytest.fixture
def manifest(synthetic_dataset):
    return load_manifest(synthetic_dataset.manifest_path, synthetic_dataset.dataset_id, synthetic_dataset.taxonomy,
                         root=synthetic_dataset.root)


@pytest.fixture(scope="module")
def acoustic_candidates():
    return load_candidates(DATA_DIR / "candidates" / "AcousticScene.jsonl")


@pytest.fixture(scope="module")
def rules():
    return load_rules(DATA_DIR / "rules.yaml")


def test_planted_sweep_is_flat(synthetic_dataset, manifest, acoustic_candidates, rules, tmp_path):
    service = EmbeddingService(MockBackend(planted=True))
    result = ablate_k(manifest, synthetic_dataset.taxonomy, service, acoustic_candidates, rules, runs=1,
                      out_dir=tmp_path / "ablation")

    assert [p.K for p in result.points] == list(DEFAULT_KS)
    assert all(p.accuracy == 100.0 for p in result.points)
    lines = (tmp_path / "ablation" / "ablation.csv").read_text().splitlines()
    assert lines[0] == "K,accuracy"
    assert lines[1:] == [f"{k},100.00" for k in DEFAULT_KS]
    assert (tmp_path / "ablation" / "ablation.json").is_file()


def test_single_prompt_matches_direct_evaluation(synthetic_dataset, manifest, acoustic_candidates):
    service = EmbeddingService(MockBackend(seed=2))
    candidate = acoustic_candidates[0]
    result = ablate_k(manifest, synthetic_dataset.taxonomy, service, [candidate], [], ks=[1], runs=1)

    promptset = PromptSet(category=candidate.category, K=1, prompts=[candidate], created_from="0" * 64,
                          reviewer="tester")
    direct = evaluate(manifest, synthetic_dataset.taxonomy, service, Condition.TSPE, promptset=promptset, runs=1)
    assert result.points[0].accuracy == direct.accuracy


def test_sweep_needs_enough_candidates(synthetic_dataset, manifest, acoustic_candidates, rules):
    service = EmbeddingService(MockBackend())
    with pytest.raises(InsufficientCandidates):
        ablate_k(manifest, synthetic_dataset.taxonomy, service, acoustic_candidates[:10], rules, ks=[5, 20])
    # 40 candidates, but the Deny rules remove some of them
    with pytest.raises(InsufficientCandidates):
        ablate_k(manifest, synthetic_dataset.taxonomy, service, acoustic_candidates, rules, ks=[len(acoustic_candidates)])


@pytest.mark.parametrize("ks", [[], [10, 5], [0, 5], [5, 5]])
def test_k_values_must_increase(synthetic_dataset, manifest, acoustic_candidates, ks):
    with pytest.raises(ValueError):
        ablate_k(manifest, synthetic_dataset.taxonomy, EmbeddingService(MockBackend()), acoustic_candidates, [], ks=ks)
