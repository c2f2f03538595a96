from datetime import datetime, timezone
from enum import Enum
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from src.utils.hashing import sha256_json

from .prompt import PromptCandidate, validate_term
from .taxonomy import TaskCategoryId


class RuleScope(str, Enum):
    ATTRIBUTE_LABEL = "AttributeLabel"
    SOURCE_LABEL = "SourceLabel"


class Verdict(str, Enum):
    ALLOW = "Allow"
    DENY = "Deny"


class CurationMode(str, Enum):
    INTERACTIVE = "interactive"
    AUTO = "auto"


class CompatibilityRule(BaseModel):
    """Whether an attribute or source may describe the labels of a category."""
    scope: RuleScope
    category: TaskCategoryId
    term: str = Field(..., description="Attribute (AttributeLabel scope) or source (SourceLabel scope)")
    verdict: Verdict
    rationale: str = ""

    @field_validator("term")
    @classmethod
    def validate_term(cls, v: str) -> str:
        return validate_term(v)

    def key(self) -> tuple:
        return (self.scope, self.category, self.term)

    def matches(self, candidate: PromptCandidate) -> bool:
        if candidate.category != self.category:
            return False
        if self.scope == RuleScope.ATTRIBUTE_LABEL:
            return candidate.attribute == self.term
        return candidate.source == self.term


class RuleTable(BaseModel):
    """Top level of ``rules.yaml``"""
    rules: List[CompatibilityRule] = Field(default_factory=list)


class CompatibilityVerdict(BaseModel):
    verdict: Verdict
    violated: List[CompatibilityRule] = Field(default_factory=list)
    allowed_by: List[CompatibilityRule] = Field(default_factory=list)

    @property
    def denied(self) -> bool:
        return self.verdict == Verdict.DENY


class PromptSet(BaseModel):
    """The K curated prompts of one task category"""
    category: TaskCategoryId
    K: int = Field(20, ge=1, description="Number of prompts in the set")
    prompts: List[PromptCandidate]
    created_from: str = Field(..., description="SHA-256 of the candidate file the set was curated from")
    reviewer: str = Field(..., min_length=1)
    mode: CurationMode = CurationMode.INTERACTIVE
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))

    @model_validator(mode="after")
    def validate_prompts(self) -> "PromptSet":
        if len(self.prompts) != self.K:
            raise ValueError(f"prompt set declares K={self.K} but holds {len(self.prompts)} prompts")
        foreign = [p.pattern for p in self.prompts if p.category != self.category]
        if foreign:
            raise ValueError(f"prompts from another category in a {self.category.value} set: {foreign}")
        return self

    def fingerprint(self) -> str:
        """SHA-256 of the canonical prompt list (order-sensitive)."""
        return sha256_json([p.model_dump(mode="json") for p in self.prompts])


class ReviewRecord(BaseModel):
    """One line of the curation transcript"""
    index: int
    pattern: str
    verdict: Verdict
    violated: List[str] = Field(default_factory=list)
    decision: Literal["accept", "reject", "quit", "denied"]
    reviewer: str
    at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    note: Optional[str] = None
