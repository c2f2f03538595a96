from .curate import candidates_digest, curate
from .review import ReviewSession
from .rules import check_compatibility, load_rules
from .store import load_promptset, save_promptset, transcript_path, write_transcript

__all__ = [
    "candidates_digest",
    "curate",
    "ReviewSession",
    "check_compatibility",
    "load_rules",
    "load_promptset",
    "save_promptset",
    "transcript_path",
    "write_transcript",
]
