import getpass
from pathlib import Path
from typing import Optional

import click

from src.curation import ReviewSession, curate, load_rules, save_promptset, transcript_path
from src.promptgen.candidates import load_candidates
from src.schemas.curation import CurationMode
from src.schemas.taxonomy import TaskCategoryId
from src.utils.hashing import sha256_file

from .common import CATEGORY_CHOICE, EXISTING_FILE, PATH, CliState, pass_state, require_category


@click.command("curate")
@click.option("--category", type=CATEGORY_CHOICE, required=True)
@click.option("--k", "k", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--mode", type=click.Choice([m.value for m in CurationMode]), default="interactive", show_default=True)
@click.option("--in", "in_path", type=EXISTING_FILE, help="Candidate file (default: <data_dir>/candidates/<category>.jsonl)")
@click.option("--out", type=PATH, help="Prompt set file (default: <data_dir>/promptsets/<category>.json)")
@click.option("--rules", "rules_path", type=EXISTING_FILE, help="Rule table (default: configured rules_path)")
@click.option("--reviewer", help="Name recorded in the prompt set")
@pass_state
def curate_command(state: CliState, category: str, k: int, mode: str, in_path: Optional[Path],
                   out: Optional[Path], rules_path: Optional[Path], reviewer: Optional[str]):
    """Filter candidates through the compatibility rules into a K-prompt set."""
    category_id = TaskCategoryId(category)
    in_path = in_path or state.candidates_path(category_id)
    out = out or state.promptset_path(category_id)
    candidates = load_candidates(in_path)
    require_category(candidates, category_id, in_path)
    rules = load_rules(rules_path or state.settings.rules_path)

    mode = CurationMode(mode)
    session = None
    if mode == CurationMode.INTERACTIVE:
        reviewer = reviewer or getpass.getuser()
        session = ReviewSession(reviewer, console=state.console)
    promptset = curate(
        candidates,
        rules,
        K=k,
        mode=mode,
        reviewer=reviewer,
        created_from=sha256_file(in_path),
        session=session,
        transcript=transcript_path(out),
    )
    save_promptset(promptset, out)
    state.console.print(f"{category_id.value}: {promptset.K} prompts written to {out} (fingerprint {promptset.fingerprint()[:12]})")
