import json

import click
import pytest
import yaml

from src.commands.common import parse_ks
from src.config import DATA_DIR
from src.curation import load_promptset
from src.main import main
from src.schemas.evaluation import EvaluationReport

ACOUSTIC_SET = DATA_DIR / "promptsets" / "AcousticScene.json"


@pytest.fixture
def settings_file(synthetic_dataset, tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("taxonomy_path: taxonomy.yaml\ncache_dir: cache\n", encoding="utf-8")
    return path


def _eval_args(settings_file, synthetic_dataset, out, *extra):
    return [
        "--config", str(settings_file),
        "eval",
        "--dataset", synthetic_dataset.dataset_id,
        "--manifest", str(synthetic_dataset.manifest_path),
        "--root", str(synthetic_dataset.root),
        "--runs", "2",
        "--out", str(out),
        *extra,
    ]


def test_eval_planted_tspe(settings_file, synthetic_dataset, tmp_path):
    out = tmp_path / "run"
    code = main(_eval_args(settings_file, synthetic_dataset, out, "--backend", "mock-planted",
                           "--condition", "tspe", "--promptset", str(ACOUSTIC_SET)))
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["per_run_accuracies"] == [100.0, 100.0]
    assert report["condition"] == "tspe"


def test_eval_rerun_from_snapshot(settings_file, synthetic_dataset, tmp_path):
    first = tmp_path / "first"
    assert main(_eval_args(settings_file, synthetic_dataset, first, "--condition", "tspe",
                           "--promptset", str(ACOUSTIC_SET))) == 0
    second = tmp_path / "second"
    assert main(["eval", "--from-config", str(first / "config.yaml"), "--out", str(second)]) == 0
    for name in ("predictions_run0.csv", "predictions_run1.csv"):
        assert (second / name).read_bytes() == (first / name).read_bytes()
    # a warm cache gives the same predictions
    third = tmp_path / "third"
    assert main(["eval", "--from-config", str(first / "config.yaml"), "--out", str(third)]) == 0
    assert (third / "predictions_run0.csv").read_bytes() == (first / "predictions_run0.csv").read_bytes()


def test_tspe_without_promptset_is_an_error(settings_file, synthetic_dataset, tmp_path, capsys):
    out = tmp_path / "run"
    assert main(_eval_args(settings_file, synthetic_dataset, out, "--condition", "tspe")) == 1
    assert "CategoryMismatch" in capsys.readouterr().err
    assert not (out / "report.json").exists()


def test_usage_errors(settings_file, capsys):
    assert main(["no-such-command"]) == 2
    assert main(["--config", str(settings_file), "eval"]) == 2
    assert "--dataset" in capsys.readouterr().err
    assert main(["--config", str(settings_file), "report"]) == 2


def test_report_csv(settings_file, synthetic_dataset, tmp_path, capsys):
    out = tmp_path / "runs" / "vanilla"
    assert main(_eval_args(settings_file, synthetic_dataset, out, "--backend", "mock-planted")) == 0
    capsys.readouterr()

    assert main(["--config", str(settings_file), "report", "--in", str(tmp_path / "runs"), "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == [
        "category,dataset,backend,condition,accuracy,best",
        "AcousticScene,Synthetic,mock-planted,vanilla,100.00,true",
    ]


def test_compare_prints_delta(tmp_path, capsys):
    paths = {}
    for condition, accuracy in (("vanilla", 55.5), ("tspe", 71.86)):
        report = EvaluationReport(dataset_id="BeijingOpera", backend_id="msclap2022", condition=condition,
                                  n_clips=236, runs=1, per_run_accuracies=[accuracy])
        paths[condition] = tmp_path / f"{condition}.json"
        paths[condition].write_text(report.model_dump_json())
    assert main(["compare", "--vanilla", str(paths["vanilla"]), "--tspe", str(paths["tspe"])]) == 0
    assert "+16.36" in capsys.readouterr().out


def test_curate_auto_reproduces_shipped_set(tmp_path):
    out = tmp_path / "AcousticScene.json"
    assert main(["curate", "--category", "AcousticScene", "--k", "20", "--mode", "auto", "--out", str(out)]) == 0
    assert load_promptset(out).fingerprint() == load_promptset(ACOUSTIC_SET).fingerprint()
    assert main(["curate", "--category", "AcousticScene", "--k", "38", "--mode", "auto",
                 "--out", str(tmp_path / "too-many.json")]) == 1


def test_gen_prompts_offline(tmp_path):
    assert main(["gen", "prompts", "--category", "NonVerbalVocal", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "NonVerbalVocal.jsonl").read_text().splitlines()
    assert len(lines) == 40
    assert (tmp_path / "NonVerbalVocal.report.json").is_file()


def test_datasets_prepare(settings_file, tmp_path):
    root = tmp_path / "sesa"
    (root / "test").mkdir(parents=True)
    for name in ("gunshot_1.wav", "siren_2.wav"):
        (root / "test" / name).write_bytes(b"")
    out = tmp_path / "sesa.csv"
    assert main(["datasets", "prepare", "--dataset", "SESA", "--root", str(root), "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1:] == ["test/gunshot_1.wav,gunshot", "test/siren_2.wav,siren"]


def test_parse_ks():
    assert parse_ks("5,10, 20") == [5, 10, 20]
    for bad in ("10,5", "", "0,5", "5,5", "five"):
        with pytest.raises(click.BadParameter):
            parse_ks(bad)


@pytest.mark.parametrize("ks", ["10,5", "", "0,5"])
def test_ablate_rejects_bad_ks(ks, capsys):
    assert main(["ablate", "--dataset", "ESC50", "--ks", ks]) == 2
    assert "--ks" in capsys.readouterr().err


def test_eval_snapshot_records_articles_path(synthetic_dataset, tmp_path):
    articles = tmp_path / "articles.yaml"
    articles.write_text("a: []\nan: [dog]\nnone: []\n", encoding="utf-8")
    settings = tmp_path / "settings.yaml"
    settings.write_text(f"taxonomy_path: taxonomy.yaml\ncache_dir: cache\narticles_path: {articles}\n",
                        encoding="utf-8")
    out = tmp_path / "run"
    assert main(_eval_args(settings, synthetic_dataset, out, "--condition", "vanilla")) == 0
    snapshot = yaml.safe_load((out / "config.yaml").read_text())
    assert snapshot["articles_path"] == str(articles)
