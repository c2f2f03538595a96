import io
import json

import pytest
from rich.console import Console

from src.config import DATA_DIR
from src.curation import (
    ReviewSession,
    check_compatibility,
    curate,
    load_promptset,
    load_rules,
    save_promptset,
    transcript_path,
)
from src.errors import ConfigError, InsufficientCandidates, ReviewAborted
from src.promptgen import load_candidates
from src.promptgen.grammar import SURFACES, make_candidate
from src.schemas.curation import CurationMode, Verdict
from src.schemas.prompt import GrammarId, Provenance
from src.schemas.taxonomy import TaskCategoryId
from src.utils.hashing import sha256_file

RULES = DATA_DIR / "rules.yaml"


def _candidates(category_id: TaskCategoryId):
    return load_candidates(DATA_DIR / "candidates" / f"{category_id.value}.jsonl")


def _session(answers):
    replies = iter(answers)
    return ReviewSession("tester", console=Console(file=io.StringIO()), ask=lambda question: next(replies))


@pytest.fixture(scope="module")
def rules():
    return load_rules(RULES)


def test_deny_rule_matches_attribute_or_source(rules):
    attr = SURFACES[GrammarId.ATTR][0]
    src = SURFACES[GrammarId.SRC][0]
    melodious = make_candidate(TaskCategoryId.IMPACT_EMERGENCY, GrammarId.ATTR, attr, "melodious", None,
                               Provenance.MANUAL)
    verdict = check_compatibility(melodious, rules)
    assert verdict.verdict == Verdict.DENY
    assert [r.term for r in verdict.violated] == ["melodious"]

    # the same attribute is fine for music
    assert not check_compatibility(melodious.model_copy(update={"category": TaskCategoryId.MUSIC_GENRE}), rules).denied

    street = make_candidate(TaskCategoryId.ACOUSTIC_SCENE, GrammarId.SRC, src, None, "street", Provenance.MANUAL)
    allowed = check_compatibility(street, rules)
    assert allowed.verdict == Verdict.ALLOW
    assert [r.term for r in allowed.allowed_by] == ["street"]


@pytest.mark.parametrize("category_id", list(TaskCategoryId))
def test_auto_curation_reproduces_shipped_promptsets(rules, category_id):
    path = DATA_DIR / "candidates" / f"{category_id.value}.jsonl"
    promptset = curate(_candidates(category_id), rules, K=20, mode=CurationMode.AUTO, created_from=sha256_file(path))
    shipped = load_promptset(DATA_DIR / "promptsets" / f"{category_id.value}.json")

    assert promptset.K == len(promptset.prompts) == 20
    assert not any(check_compatibility(p, rules).denied for p in promptset.prompts)
    assert promptset.prompts == shipped.prompts
    assert promptset.fingerprint() == shipped.fingerprint()
    assert shipped.created_from == sha256_file(path)
    assert promptset.reviewer == "auto"


def test_survivor_boundary(rules):
    candidates = _candidates(TaskCategoryId.IMPACT_EMERGENCY)
    survivors = [c for c in candidates if not check_compatibility(c, rules).denied]
    assert len(survivors) == 34

    exact = curate(candidates, rules, K=34, mode=CurationMode.AUTO)
    assert exact.prompts == survivors
    with pytest.raises(InsufficientCandidates):
        curate(candidates, rules, K=35, mode=CurationMode.AUTO)


def test_interactive_review_writes_transcript(tmp_path, rules):
    candidates = _candidates(TaskCategoryId.NON_VERBAL_VOCAL)
    transcript = transcript_path(tmp_path / "NonVerbalVocal.json")
    answers = ["maybe", "n"] + ["y"] * 40
    promptset = curate(candidates, rules, K=5, mode=CurationMode.INTERACTIVE, reviewer="tester",
                       session=_session(answers), transcript=transcript)

    assert promptset.mode == CurationMode.INTERACTIVE
    assert promptset.reviewer == "tester"
    survivors = [c for c in candidates if not check_compatibility(c, rules).denied]
    assert promptset.prompts == survivors[1:6]

    records = [json.loads(line) for line in transcript.read_text(encoding="utf-8").splitlines()]
    decisions = [r["decision"] for r in records]
    assert decisions.count("reject") == 1
    assert decisions.count("accept") == 5
    assert all(r["reviewer"] == "tester" for r in records)
    assert transcript.name == "NonVerbalVocal.json.review.jsonl"


def test_quitting_aborts_but_keeps_transcript(tmp_path, rules):
    transcript = tmp_path / "review.jsonl"
    with pytest.raises(ReviewAborted):
        curate(_candidates(TaskCategoryId.MUSIC_GENRE), rules, K=20, mode=CurationMode.INTERACTIVE,
               reviewer="tester", session=_session(["y", "y", "q"]), transcript=transcript)
    records = [json.loads(line) for line in transcript.read_text(encoding="utf-8").splitlines()]
    assert [r["decision"] for r in records if r["decision"] != "denied"] == ["accept", "accept", "quit"]


def test_rejecting_too_many_is_insufficient(rules):
    with pytest.raises(InsufficientCandidates):
        curate(_candidates(TaskCategoryId.MUSIC_GENRE), rules, K=20, mode=CurationMode.INTERACTIVE,
               reviewer="tester", session=_session(["n"] * 40))


def test_duplicate_rules_are_rejected(tmp_path):
    path = tmp_path / "rules.yaml"
    path.write_text(
        "rules:\n"
        "  - {scope: SourceLabel, category: MusicGenre, term: street, verdict: Deny}\n"
        "  - {scope: SourceLabel, category: MusicGenre, term: street, verdict: Allow}\n",
        encoding="utf-8",
    )
    with pytest.raises(ConfigError, match=r"rules.yaml:3: duplicate rule"):
        load_rules(path)


def test_promptset_file_is_checked_on_load(tmp_path, rules):
    promptset = curate(_candidates(TaskCategoryId.ACOUSTIC_SCENE), rules, K=3, mode=CurationMode.AUTO)
    path = tmp_path / "set.json"
    save_promptset(promptset, path)
    assert load_promptset(path) == promptset

    data = json.loads(path.read_text(encoding="utf-8"))
    data["K"] = 4
    path.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(ConfigError, match="K=4"):
        load_promptset(path)
