from pathlib import Path
from typing import Iterable

from pydantic import ValidationError

from src.errors import ConfigError
from src.promptgen.grammar import parse
from src.schemas.curation import PromptSet, ReviewRecord
from src.schemas.prompt import LABEL_SLOT


def save_promptset(promptset: PromptSet, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(promptset.model_dump_json(indent=2) + "\n", encoding="utf-8")


def load_promptset(path: Path) -> PromptSet:
    """Load a prompt set and check every prompt still parses to its grammar."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read prompt set: {exc}") from exc
    try:
        promptset = PromptSet.model_validate_json(text)
    except ValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(p) for p in error.get("loc", ())) or "<root>"
        raise ConfigError(f"{path}: field '{field}': {error.get('msg')}") from exc
    for index, prompt in enumerate(promptset.prompts):
        parsed = parse(prompt.pattern, label_text=LABEL_SLOT)
        if parsed is None or parsed.grammar_id != prompt.grammar_id:
            raise ConfigError(f"{path}: field 'prompts.{index}.pattern': '{prompt.pattern}' does not parse as {prompt.grammar_id.value}")
    return promptset


def transcript_path(out_path: Path) -> Path:
    out_path = Path(out_path)
    return out_path.with_name(out_path.name + ".review.jsonl")


def write_transcript(records: Iterable[ReviewRecord], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        for record in records:
            fp.write(record.model_dump_json() + "\n")
