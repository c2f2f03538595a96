from typing import List, Tuple

from pydantic import BaseModel, Field, field_validator

from .embedding import Embedding


class ClassEnsemble(BaseModel):
    """Averaged text representation of one class"""
    label_id: str
    vector: Embedding
    K_used: int = Field(..., ge=1)
    promptset_hash: str


class LabelScore(BaseModel):
    label_id: str
    cosine: float

    @field_validator("cosine")
    @classmethod
    def validate_cosine(cls, v: float) -> float:
        if not -1.0 - 1e-9 <= v <= 1.0 + 1e-9:
            raise ValueError(f"cosine {v} outside [-1, 1]")
        return v


class ScoreVector(BaseModel):
    """Cosine of the audio embedding against every class, in stable label order"""
    scores: List[LabelScore]

    def as_pairs(self) -> List[Tuple[str, float]]:
        return [(s.label_id, s.cosine) for s in self.scores]

    def top(self) -> LabelScore:
        return max(self.scores, key=lambda s: s.cosine)
