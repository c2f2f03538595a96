import statistics
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field, computed_field, field_validator, model_validator

from .taxonomy import TaskCategoryId


class Condition(str, Enum):
    VANILLA = "vanilla"
    TSPE = "tspe"


class ManifestRow(BaseModel):
    clip_path: str = Field(..., min_length=1, description="Clip path relative to the dataset root")
    label_id: str = Field(..., min_length=1)


class DatasetManifest(BaseModel):
    """Labelled clips of one dataset split"""
    dataset_id: str
    split: str = "test"
    root: Path
    rows: List[ManifestRow] = Field(..., min_length=1)

    def clip_paths(self) -> List[Path]:
        return [self.resolve(row.clip_path) for row in self.rows]

    def resolve(self, clip_path: str) -> Path:
        path = Path(clip_path)
        return path if path.is_absolute() else self.root / path


class ClipPrediction(BaseModel):
    clip: str
    gold: str
    predicted: str
    top_cosine: float

    @property
    def correct(self) -> bool:
        return self.gold == self.predicted


class EvaluationReport(BaseModel):
    """Accuracy of one (dataset, backend, condition) cell"""
    dataset_id: str
    category: Optional[TaskCategoryId] = None
    split: str = "test"
    backend_id: str
    condition: Condition
    n_clips: int = Field(..., ge=0)
    runs: int = Field(5, ge=1)
    per_run_accuracies: List[float] = Field(..., min_length=1)
    promptset_hash: Optional[str] = None
    seed: int = 0
    identical_runs: bool = True
    averaging: str = "normalize_first"
    timestamp: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))

    @field_validator("per_run_accuracies")
    @classmethod
    def validate_accuracies(cls, v: List[float]) -> List[float]:
        for value in v:
            if not 0.0 <= value <= 100.0:
                raise ValueError(f"accuracy {value} outside [0, 100]")
        return v

    @model_validator(mode="after")
    def validate_runs(self) -> "EvaluationReport":
        if len(self.per_run_accuracies) != self.runs:
            raise ValueError(f"{self.runs} runs declared, {len(self.per_run_accuracies)} accuracies recorded")
        return self

    @computed_field
    @property
    def accuracy(self) -> float:
        """Mean of the per-run accuracies, in percent."""
        return statistics.fmean(self.per_run_accuracies)


class ComparisonResult(BaseModel):
    dataset_id: str
    backend_id: str
    vanilla: EvaluationReport
    tspe: EvaluationReport

    @computed_field
    @property
    def delta(self) -> float:
        """Absolute percentage points gained by prompt ensembling."""
        return self.tspe.accuracy - self.vanilla.accuracy


class AblationPoint(BaseModel):
    K: int = Field(..., ge=1)
    accuracy: float = Field(..., ge=0.0, le=100.0)


class AblationResult(BaseModel):
    dataset_id: str
    backend_id: str
    points: List[AblationPoint]

    @field_validator("points")
    @classmethod
    def validate_points(cls, v: List[AblationPoint]) -> List[AblationPoint]:
        ks = [p.K for p in v]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError(f"K values must be strictly increasing, got {ks}")
        return v
