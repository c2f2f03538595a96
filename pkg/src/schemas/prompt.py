import re
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from .taxonomy import TaskCategoryId

LABEL_SLOT = "<label>"
ATTRIBUTE_SLOT = "<attribute>"
SOURCE_SLOT = "<source>"

# lowercase words, spaces and hyphens; at most three words
_TERM_RE = re.compile(r"^[a-z][a-z'\-]*( [a-z][a-z'\-]*){0,2}$")


class GrammarId(str, Enum):
    ATTR = "ATTR"
    SRC = "SRC"
    ATTR_SRC = "ATTR_SRC"
    # baseline template; generators never produce it
    VANILLA = "VANILLA"


class Provenance(str, Enum):
    LLM = "LLM"
    OFFLINE = "Offline"
    MANUAL = "Manual"


REQUIRED_SLOTS: Dict[GrammarId, frozenset] = {
    GrammarId.ATTR: frozenset({"attribute", "label"}),
    GrammarId.SRC: frozenset({"label", "source"}),
    GrammarId.ATTR_SRC: frozenset({"attribute", "label", "source"}),
    GrammarId.VANILLA: frozenset({"label"}),
}


def validate_term(term: str) -> str:
    """Normalize a pool entry and enforce the single-phrase shape rule."""
    value = re.sub(r"\s+", " ", term).strip().lower()
    if not _TERM_RE.match(value):
        raise ValueError(f"'{term}' is not a single lowercase phrase of at most three words")
    return value


class _Pool(BaseModel):
    pool_id: str = Field(..., min_length=1)

    @staticmethod
    def _validate_entries(v: List[str]) -> List[str]:
        entries = [validate_term(t) for t in v]
        duplicates = sorted({t for t in entries if entries.count(t) > 1})
        if duplicates:
            raise ValueError(f"duplicate entries: {duplicates}")
        return entries


class AttributePool(_Pool):
    """Sound attributes, e.g. 'loud', 'feeble', 'melodious'"""
    attributes: List[str] = Field(default_factory=list)

    @field_validator("attributes")
    @classmethod
    def validate_attributes(cls, v: List[str]) -> List[str]:
        return cls._validate_entries(v)


class SourcePool(_Pool):
    """Sound sources, e.g. 'tunnel', 'street', 'church'"""
    sources: List[str] = Field(default_factory=list)

    @field_validator("sources")
    @classmethod
    def validate_sources(cls, v: List[str]) -> List[str]:
        return cls._validate_entries(v)


class PoolHeader(BaseModel):
    attribute_count: int = Field(30, ge=0)
    source_count: int = Field(30, ge=0)
    provenance: Provenance = Provenance.MANUAL
    seed: Optional[int] = None


class CategoryPools(BaseModel):
    attributes: List[str]
    sources: List[str]


class PoolFile(BaseModel):
    """Contents of ``pools.yaml``: the global pools plus the per-category mapping."""
    header: PoolHeader = Field(default_factory=PoolHeader)
    attributes: List[str]
    sources: List[str]
    categories: Dict[TaskCategoryId, CategoryPools] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_counts(self) -> "PoolFile":
        if len(self.attributes) != self.header.attribute_count:
            raise ValueError(
                f"header declares {self.header.attribute_count} attributes, file has {len(self.attributes)}"
            )
        if len(self.sources) != self.header.source_count:
            raise ValueError(f"header declares {self.header.source_count} sources, file has {len(self.sources)}")
        return self


class PromptTemplate(BaseModel):
    """A slotted surface form belonging to one of the grammars."""
    grammar_id: GrammarId
    pattern: str

    @model_validator(mode="after")
    def validate_slots(self) -> "PromptTemplate":
        if self.pattern.count(LABEL_SLOT) != 1:
            raise ValueError(f"pattern must contain {LABEL_SLOT} exactly once: '{self.pattern}'")
        found = {slot.strip("<>") for slot in re.findall(r"<[a-z]+>", self.pattern)}
        if found != REQUIRED_SLOTS[self.grammar_id]:
            raise ValueError(
                f"{self.grammar_id.value} pattern needs slots {sorted(REQUIRED_SLOTS[self.grammar_id])}, got {sorted(found)}"
            )
        return self


class PromptCandidate(BaseModel):
    """A prompt with attribute/source bound and the label slot still free."""
    category: TaskCategoryId
    grammar_id: GrammarId
    attribute: Optional[str] = None
    source: Optional[str] = None
    pattern: str = Field(..., description="Prompt text with the literal <label> slot left unbound")
    provenance: Provenance = Provenance.OFFLINE

    @model_validator(mode="after")
    def validate_bindings(self) -> "PromptCandidate":
        required = REQUIRED_SLOTS[self.grammar_id]
        if ("attribute" in required) != (self.attribute is not None):
            raise ValueError(f"{self.grammar_id.value} candidates {'need' if 'attribute' in required else 'take no'} attribute")
        if ("source" in required) != (self.source is not None):
            raise ValueError(f"{self.grammar_id.value} candidates {'need' if 'source' in required else 'take no'} source")
        if self.pattern.count(LABEL_SLOT) != 1:
            raise ValueError(f"pattern must contain {LABEL_SLOT} exactly once: '{self.pattern}'")
        return self

    def key(self) -> tuple:
        return (self.grammar_id, self.attribute, self.source, self.pattern)


class GenerationReport(BaseModel):
    """Bookkeeping of one generation call"""
    category: Optional[TaskCategoryId] = None
    backend: str
    requested: int
    accepted: int = 0
    rejected_unparseable: int = 0
    rejected_pool: int = 0
    duplicates: int = 0
    rounds: int = 0
