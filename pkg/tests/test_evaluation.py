import statistics

import pytest
from filelock import FileLock

from src.config import DATA_DIR, RunConfig, Settings
from src.curation import load_promptset
from src.encoder import EmbeddingService
from src.errors import CategoryMismatch, ManifestError, RunDirLocked
from src.evaluation import RunDirectory, evaluate, load_manifest, load_report, run_evaluation
from src.models.mock import MockBackend
from src.promptgen.articles import ArticleTable
from src.promptgen.grammar import vanilla_candidate
from src.schemas.curation import PromptSet
from src.schemas.evaluation import Condition
from src.schemas.taxonomy import TaskCategoryId
from src.utils.yaml_config import load_yaml, validate_model

ACOUSTIC_SET = DATA_DIR / "promptsets" / "AcousticScene.json"
GENRE_SET = DATA_DIR / "promptsets" / "MusicGenre.json"


class SeededMock(MockBackend):
    seed_sensitive = True

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        self.reseeds = []

    def reseed(self, seed):
        self.reseeds.append(seed)
        self.seed = seed


@pytest.fixture
def manifest(synthetic_dataset):
    return load_manifest(synthetic_dataset.manifest_path, synthetic_dataset.dataset_id, synthetic_dataset.taxonomy,
                         root=synthetic_dataset.root)


def _vanilla_only_set():
    return PromptSet(category=TaskCategoryId.ACOUSTIC_SCENE, K=1,
                     prompts=[vanilla_candidate(TaskCategoryId.ACOUSTIC_SCENE)],
                     created_from="0" * 64, reviewer="tester")


@pytest.mark.parametrize("condition", [Condition.VANILLA, Condition.TSPE])
def test_planted_backend_is_perfect(synthetic_dataset, manifest, condition):
    service = EmbeddingService(MockBackend(seed=0, planted=True))
    promptset = load_promptset(ACOUSTIC_SET) if condition == Condition.TSPE else None
    report = evaluate(manifest, synthetic_dataset.taxonomy, service, condition, promptset=promptset, runs=5)

    assert report.n_clips == 100
    assert report.per_run_accuracies == [100.0] * 5
    assert report.accuracy == 100.0
    assert report.identical_runs
    assert report.category == TaskCategoryId.ACOUSTIC_SCENE
    assert report.promptset_hash == (promptset.fingerprint() if promptset else None)


def test_vanilla_only_promptset_reproduces_vanilla(synthetic_dataset, manifest):
    service = EmbeddingService(MockBackend(seed=5))
    vanilla = evaluate(manifest, synthetic_dataset.taxonomy, service, Condition.VANILLA, runs=1)
    reduced = evaluate(manifest, synthetic_dataset.taxonomy, service, Condition.TSPE,
                       promptset=_vanilla_only_set(), runs=1)
    assert reduced.accuracy == vanilla.accuracy


def test_accuracy_is_the_mean_of_runs(synthetic_dataset, manifest):
    backend = SeededMock(seed=0)
    report = evaluate(manifest, synthetic_dataset.taxonomy, EmbeddingService(backend), Condition.VANILLA,
                      runs=5, seed=40)
    assert backend.reseeds == [40, 41, 42, 43, 44]
    assert len(report.per_run_accuracies) == 5
    assert all(0.0 <= a <= 100.0 for a in report.per_run_accuracies)
    assert report.accuracy == statistics.fmean(report.per_run_accuracies)


def test_tspe_needs_a_matching_promptset(synthetic_dataset, manifest):
    service = EmbeddingService(MockBackend())
    with pytest.raises(CategoryMismatch):
        evaluate(manifest, synthetic_dataset.taxonomy, service, Condition.TSPE)
    with pytest.raises(CategoryMismatch):
        evaluate(manifest, synthetic_dataset.taxonomy, service, Condition.TSPE, promptset=load_promptset(GENRE_SET))


def test_manifest_validation(synthetic_dataset, tmp_path):
    def write(name, body):
        path = tmp_path / name
        path.write_text(body, encoding="utf-8")
        return path

    taxonomy = synthetic_dataset.taxonomy
    root = synthetic_dataset.root
    with pytest.raises(ManifestError, match="header"):
        load_manifest(write("h.csv", "path,label\ndog/dog_00.wav,dog\n"), "Synthetic", taxonomy, root=root)
    with pytest.raises(ManifestError, match="not registered"):
        load_manifest(write("u.csv", "clip_path,label\ndog/dog_00.wav,cat\n"), "Synthetic", taxonomy, root=root)
    with pytest.raises(ManifestError, match="duplicate"):
        load_manifest(write("d.csv", "clip_path,label\ndog/dog_00.wav,dog\ndog/dog_00.wav,dog\n"),
                      "Synthetic", taxonomy, root=root)
    with pytest.raises(ManifestError, match="missing"):
        load_manifest(write("m.csv", "clip_path,label\ndog/dog_99.wav,dog\n"), "Synthetic", taxonomy, root=root)
    with pytest.raises(ManifestError, match="no clips"):
        load_manifest(write("e.csv", "clip_path,label\n"), "Synthetic", taxonomy, root=root)


def _run_config(synthetic_dataset, out_dir, **overrides):
    values = dict(
        dataset_id=synthetic_dataset.dataset_id,
        backend_id="mock",
        condition="tspe",
        runs=2,
        seed=3,
        taxonomy_path=synthetic_dataset.taxonomy_path,
        manifest_path=synthetic_dataset.manifest_path,
        dataset_root=synthetic_dataset.root,
        out_dir=out_dir,
        promptset_path=ACOUSTIC_SET,
    )
    values.update(overrides)
    return RunConfig(**values)


def test_run_directory_snapshot_reruns_identically(synthetic_dataset, tmp_path):
    first_dir = tmp_path / "first"
    report = run_evaluation(_run_config(synthetic_dataset, first_dir), Settings(cache_dir=None))

    for name in ("config.yaml", "manifest.csv", "predictions_run0.csv", "predictions_run1.csv", "report.json"):
        assert (first_dir / name).is_file()
    assert load_report(first_dir / "report.json").accuracy == report.accuracy
    assert (first_dir / "predictions_run0.csv").read_text().splitlines()[0] == "clip,gold,predicted,top_cosine"

    snapshot = validate_model(RunConfig, load_yaml(first_dir / "config.yaml"), first_dir / "config.yaml")
    assert snapshot.backend_config["backend_id"] == "mock"
    assert snapshot.promptset_hash == load_promptset(ACOUSTIC_SET).fingerprint()
    second_dir = tmp_path / "second"
    rerun = run_evaluation(snapshot.model_copy(update={"out_dir": second_dir}), Settings(cache_dir=None))
    assert rerun.per_run_accuracies == report.per_run_accuracies
    assert (second_dir / "predictions_run0.csv").read_bytes() == (first_dir / "predictions_run0.csv").read_bytes()


def test_run_without_promptset_fails_before_writing(synthetic_dataset, tmp_path):
    out = tmp_path / "run"
    with pytest.raises(CategoryMismatch):
        run_evaluation(_run_config(synthetic_dataset, out, promptset_path=None), Settings(cache_dir=None))
    assert not out.exists()


def test_run_directory_is_exclusive(tmp_path):
    with RunDirectory(tmp_path / "run"):
        with pytest.raises(RunDirLocked):
            with RunDirectory(tmp_path / "run"):
                pass
    held = FileLock(str(tmp_path / "other" / ".lock"))
    (tmp_path / "other").mkdir()
    with held:
        with pytest.raises(RunDirLocked):
            RunDirectory(tmp_path / "other").__enter__()


class RecordingMock(MockBackend):
    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        self.texts = []

    def encode_text(self, texts):
        self.texts.extend(texts)
        return super().encode_text(texts)


def test_evaluate_renders_with_the_given_articles(synthetic_dataset, manifest):
    backend = RecordingMock()
    evaluate(manifest, synthetic_dataset.taxonomy, EmbeddingService(backend), Condition.VANILLA, runs=1,
             articles=ArticleTable(force_an=frozenset({"dog"})))
    assert "This is the sound of an dog" in backend.texts
    assert "This is the sound of a dog" not in backend.texts


def test_run_config_articles_path_reaches_the_prompts(synthetic_dataset, tmp_path, monkeypatch):
    articles = tmp_path / "articles.yaml"
    articles.write_text("a: []\nan: [siren]\nnone: []\n", encoding="utf-8")
    config = _run_config(synthetic_dataset, tmp_path / "run", condition="vanilla", promptset_path=None,
                         articles_path=articles)
    backend = RecordingMock()
    monkeypatch.setattr("src.evaluation.harness.create_backend", lambda *args, **kwargs: backend)
    run_evaluation(config, Settings(cache_dir=None))
    assert "This is the sound of an siren" in backend.texts
    snapshot = load_yaml(tmp_path / "run" / "config.yaml")
    assert snapshot["articles_path"] == str(articles)
