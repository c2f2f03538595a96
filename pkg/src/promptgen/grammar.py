"""Prompt grammars: binding, rendering and parsing.

Every surface form below belongs to exactly one grammar. Articles written as
"a" in a surface are placeholders: the actual article ("a", "an" or none) is
chosen for the word bound into the following slot.
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from src.errors import UnboundSlot
from src.schemas.prompt import (
    LABEL_SLOT,
    REQUIRED_SLOTS,
    GrammarId,
    PromptCandidate,
    PromptTemplate,
    Provenance,
    validate_term,
)
from src.schemas.taxonomy import TaskCategoryId

from .articles import ArticleTable, load_articles

SURFACES: Dict[GrammarId, Tuple[str, ...]] = {
    GrammarId.ATTR: ("A <attribute> sound of a <label>",),
    GrammarId.SRC: (
        "The sound of a <label> coming from a <source>",
        "A sound of a <label> coming from a <source>",
    ),
    GrammarId.ATTR_SRC: (
        "A <attribute> sound of a <label> coming from a <source>",
        "A <attribute> sound of a <label> can be heard from a <source>",
    ),
    GrammarId.VANILLA: ("This is the sound of a <label>",),
}

GENERATED_GRAMMARS: Tuple[GrammarId, ...] = (GrammarId.ATTR, GrammarId.SRC, GrammarId.ATTR_SRC)

TEMPLATES: List[PromptTemplate] = [
    PromptTemplate(grammar_id=grammar, pattern=surface) for grammar, surfaces in SURFACES.items() for surface in surfaces
]

# longer / more specific surfaces first so ATTR never swallows an ATTR_SRC prompt
_PARSE_ORDER: Tuple[Tuple[GrammarId, str], ...] = tuple(
    (grammar, surface)
    for grammar in (GrammarId.ATTR_SRC, GrammarId.SRC, GrammarId.VANILLA, GrammarId.ATTR)
    for surface in SURFACES[grammar]
)

_SLOT_RE = re.compile(r"(?:\b([Aa]n?) )?<(attribute|label|source)>")
_TERM_GROUP = r"[a-z][a-z'\- ]*?"


@dataclass(frozen=True)
class ParsedPrompt:
    grammar_id: GrammarId
    surface: str
    label: str
    attribute: Optional[str] = None
    source: Optional[str] = None


def _fill(text: str, slot: str, value: str, articles: ArticleTable) -> str:
    pattern = re.compile(r"(?:\b([Aa]n?) )?<" + slot + ">")

    def substitute(match: re.Match) -> str:
        article = match.group(1)
        if article is None:
            return value
        chosen = articles.article_for(value)
        sentence_start = article[0].isupper()
        if not chosen:
            return value[:1].upper() + value[1:] if sentence_start else value
        return f"{chosen.capitalize() if sentence_start else chosen} {value}"

    return pattern.sub(substitute, text)


def bind(surface: str, attribute: Optional[str] = None, source: Optional[str] = None,
         articles: Optional[ArticleTable] = None) -> str:
    """Bind attribute/source into a surface, leaving the label slot free."""
    articles = articles or load_articles()
    text = surface
    if attribute is not None:
        text = _fill(text, "attribute", attribute, articles)
    if source is not None:
        text = _fill(text, "source", source, articles)
    return text


def render(candidate: PromptCandidate, label_text: str, articles: Optional[ArticleTable] = None) -> str:
    """Substitute the label into a candidate and fix its article."""
    if not label_text or not label_text.strip():
        raise UnboundSlot("label text is empty; the <label> slot cannot be bound")
    required = REQUIRED_SLOTS[candidate.grammar_id]
    if "attribute" in required and not candidate.attribute:
        raise UnboundSlot(f"{candidate.grammar_id.value} prompt has no attribute bound: '{candidate.pattern}'")
    if "source" in required and not candidate.source:
        raise UnboundSlot(f"{candidate.grammar_id.value} prompt has no source bound: '{candidate.pattern}'")
    for slot in ("<attribute>", "<source>"):
        if slot in candidate.pattern:
            raise UnboundSlot(f"slot {slot} is still unbound in '{candidate.pattern}'")
    text = _fill(candidate.pattern, "label", label_text.strip(), articles or load_articles())
    if "<" in text or ">" in text:
        raise UnboundSlot(f"rendered prompt still contains markup: '{text}'")
    return text


def vanilla_prompt(label_text: str, articles: Optional[ArticleTable] = None) -> str:
    """The single generic baseline prompt, 'This is the sound of a <label>'."""
    if not label_text or not label_text.strip():
        raise ValueError("label_text must be non-empty")
    return _fill(SURFACES[GrammarId.VANILLA][0], "label", label_text.strip(), articles or load_articles())


def vanilla_candidate(category: TaskCategoryId) -> PromptCandidate:
    return PromptCandidate(
        category=category,
        grammar_id=GrammarId.VANILLA,
        pattern=SURFACES[GrammarId.VANILLA][0],
        provenance=Provenance.MANUAL,
    )


@lru_cache(maxsize=4096)
def _compile(surface: str, label_text: Optional[str]) -> re.Pattern:
    regex = "^"
    position = 0
    for match in _SLOT_RE.finditer(surface):
        regex += re.escape(surface[position:match.start()])
        article, slot = match.group(1), match.group(2)
        if article is not None:
            # a sentence-initial article is always written; inner ones may be dropped
            regex += "An? " if article[0].isupper() else "(?:[Aa]n? )?"
        if slot == "label":
            body = re.escape(label_text) if label_text is not None else r"[^<>]+?"
        else:
            body = _TERM_GROUP
        regex += f"(?P<{slot}>{body})"
        position = match.end()
    regex += re.escape(surface[position:]) + "$"
    return re.compile(regex)


def parse(text: str, label_text: Optional[str] = None) -> Optional[ParsedPrompt]:
    """Recover grammar and bindings from a prompt.

    ``label_text`` pins the label (pass ``"<label>"`` for unbound candidate
    patterns); when omitted the label is matched as free text.
    """
    text = " ".join(text.split())
    for grammar, surface in _PARSE_ORDER:
        match = _compile(surface, label_text).match(text)
        if match is None:
            continue
        groups = match.groupdict()
        return ParsedPrompt(
            grammar_id=grammar,
            surface=surface,
            label=groups["label"],
            attribute=groups.get("attribute"),
            source=groups.get("source"),
        )
    return None


def extract_label(text: str) -> Optional[str]:
    parsed = parse(text)
    return parsed.label if parsed is not None else None


_LIST_MARKER_RE = re.compile(r"^\s*(?:\d+\s*[.):]|[-*•])\s*")


def clean_line(line: str) -> str:
    """Strip list numbering, quotes and trailing punctuation from an LLM output line."""
    text = _LIST_MARKER_RE.sub("", line.strip())
    text = text.strip().strip("\"'“”‘’`").strip()
    return text.rstrip(".").strip()


def candidate_from_line(line: str, category: TaskCategoryId, provenance: Provenance,
                        articles: Optional[ArticleTable] = None) -> Optional[PromptCandidate]:
    """Turn one generated line into a candidate, or ``None`` if it fits no grammar."""
    parsed = parse(clean_line(line), label_text=LABEL_SLOT)
    if parsed is None or parsed.grammar_id not in GENERATED_GRAMMARS:
        return None
    try:
        attribute = validate_term(parsed.attribute) if parsed.attribute is not None else None
        source = validate_term(parsed.source) if parsed.source is not None else None
    except ValueError:
        return None
    return make_candidate(category, parsed.grammar_id, parsed.surface, attribute, source, provenance, articles)


def make_candidate(category: TaskCategoryId, grammar_id: GrammarId, surface: str,
                   attribute: Optional[str], source: Optional[str], provenance: Provenance,
                   articles: Optional[ArticleTable] = None) -> PromptCandidate:
    return PromptCandidate(
        category=category,
        grammar_id=grammar_id,
        attribute=attribute,
        source=source,
        pattern=bind(surface, attribute, source, articles),
        provenance=provenance,
    )
