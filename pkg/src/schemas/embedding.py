from enum import Enum
from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

NORM_TOLERANCE = 1e-6


class Modality(str, Enum):
    TEXT = "text"
    AUDIO = "audio"


class Embedding(BaseModel):
    """One embedding vector; ``normalized`` vectors have unit L2 norm."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    normalized: bool = True

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, v: Any) -> np.ndarray:
        array = np.asarray(v, dtype=np.float64)
        if array.ndim != 1 or array.size < 1:
            raise ValueError(f"embedding must be a non-empty vector, got shape {array.shape}")
        return array

    @property
    def dimension(self) -> int:
        return int(self.values.shape[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


class BackendInfo(BaseModel):
    """What a backend declares about itself; recorded in every run directory."""
    backend_id: str = Field(..., min_length=1)
    dimension: int = Field(..., ge=1)
    sample_rate: int = Field(..., ge=1)
    capabilities: List[Modality] = Field(default_factory=lambda: [Modality.TEXT, Modality.AUDIO])
    seed_sensitive: bool = False
    preprocessing: Dict[str, Any] = Field(default_factory=dict, description="Audio preprocessing policy")


class CacheHeader(BaseModel):
    """First line of an embedding cache file"""
    backend_id: str
    modality: Modality
    dimension: int = Field(..., ge=1)
