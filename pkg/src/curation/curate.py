import getpass
import logging
from pathlib import Path
from typing import List, Optional

from src.errors import InsufficientCandidates, ReviewAborted
from src.schemas.curation import CompatibilityRule, CurationMode, PromptSet, ReviewRecord
from src.schemas.prompt import PromptCandidate
from src.utils.hashing import sha256_text
from src.utils.log import log_event

from .review import ReviewSession
from .rules import check_compatibility
from .store import write_transcript

logger = logging.getLogger(__name__)


def candidates_digest(candidates: List[PromptCandidate]) -> str:
    """SHA-256 of the candidates as written by ``save_candidates``."""
    return sha256_text("".join(c.model_dump_json() + "\n" for c in candidates))


def curate(
    candidates: List[PromptCandidate],
    rules: List[CompatibilityRule],
    K: int = 20,
    mode: CurationMode = CurationMode.AUTO,
    reviewer: Optional[str] = None,
    created_from: Optional[str] = None,
    session: Optional[ReviewSession] = None,
    transcript: Optional[Path] = None,
) -> PromptSet:
    """Reduce candidates to K prompts that pass every Deny rule.

    Auto mode keeps the first K survivors in candidate order; interactive
    mode asks the reviewer about each survivor until K are accepted.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    mode = CurationMode(mode)
    if not candidates:
        raise InsufficientCandidates(f"no candidates to curate (K={K})")
    category = candidates[0].category
    if reviewer is None:
        reviewer = "auto" if mode == CurationMode.AUTO else getpass.getuser()

    verdicts = [check_compatibility(c, rules) for c in candidates]
    survivors = sum(1 for v in verdicts if not v.denied)
    if survivors < K:
        raise InsufficientCandidates(
            f"{category.value}: {survivors} of {len(candidates)} candidates survive the Deny rules, K={K}"
        )

    records: List[ReviewRecord] = []
    accepted: List[PromptCandidate] = []
    if mode == CurationMode.INTERACTIVE and session is None:
        session = ReviewSession(reviewer)

    try:
        for index, (candidate, verdict) in enumerate(zip(candidates, verdicts)):
            if len(accepted) == K:
                break
            if verdict.denied:
                records.append(_record(index, candidate, verdict, "denied", reviewer))
                continue
            if mode == CurationMode.AUTO:
                decision = "accept"
            else:
                answer = session.decide(candidate, verdict, len(accepted), K)
                decision = {"y": "accept", "n": "reject", "q": "quit"}[answer]
            records.append(_record(index, candidate, verdict, decision, reviewer))
            if decision == "quit":
                raise ReviewAborted(f"review of {category.value} aborted after {len(accepted)} of {K} prompts")
            if decision == "accept":
                accepted.append(candidate)
    finally:
        if transcript is not None:
            write_transcript(records, transcript)

    if len(accepted) < K:
        raise InsufficientCandidates(f"{category.value}: reviewer accepted {len(accepted)} prompts, K={K}")

    promptset = PromptSet(
        category=category,
        K=K,
        prompts=accepted,
        created_from=created_from or candidates_digest(candidates),
        reviewer=reviewer,
        mode=mode,
    )
    log_event(logger, "promptset_curated", category=category.value, k=K, mode=mode.value,
              denied=len(candidates) - survivors, reviewer=reviewer)
    return promptset


def _record(index: int, candidate: PromptCandidate, verdict, decision: str, reviewer: str) -> ReviewRecord:
    return ReviewRecord(
        index=index,
        pattern=candidate.pattern,
        verdict=verdict.verdict,
        violated=[f"{r.scope.value}:{r.term}: {r.rationale}" for r in verdict.violated],
        decision=decision,
        reviewer=reviewer,
    )
