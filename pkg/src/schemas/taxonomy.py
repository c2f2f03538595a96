import re
from enum import Enum
from typing import List, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator


class TaskCategoryId(str, Enum):
    """The five label groups prompts are scoped to."""
    MUSICAL_INSTRUMENTS = "MusicalInstruments"
    ACOUSTIC_SCENE = "AcousticScene"
    MUSIC_GENRE = "MusicGenre"
    IMPACT_EMERGENCY = "ImpactEmergency"
    NON_VERBAL_VOCAL = "NonVerbalVocal"


def normalize_label(text: str) -> str:
    """Lowercase, underscores to spaces, collapse whitespace."""
    return re.sub(r"\s+", " ", text.replace("_", " ")).strip().lower()


class TaskCategory(BaseModel):
    """Task category with references to its attribute and source pools"""
    id: TaskCategoryId
    name: str = Field(..., min_length=1, description="Display name, e.g. 'Musical Instruments Recognition'")
    description: str = ""
    attribute_pool_ref: str = Field(..., min_length=1, description="pool_id of the category's AttributePool")
    source_pool_ref: str = Field(..., min_length=1, description="pool_id of the category's SourcePool")


class LabelSpec(BaseModel):
    """A label as written in the taxonomy file."""
    id: str = Field(..., min_length=1)
    display: Optional[str] = None


class LabelEntry(BaseModel):
    """One row of the label registry"""
    label_id: str
    display_text: str
    dataset_id: str

    @field_validator("display_text")
    @classmethod
    def validate_display_text(cls, v: str) -> str:
        if not v or v.isspace():
            raise ValueError("display_text cannot be empty")
        if "<" in v or ">" in v:
            raise ValueError(f"display_text '{v}' contains template slot markers")
        return v


class DatasetDescriptor(BaseModel):
    """Dataset entry of the taxonomy configuration"""
    dataset_id: str = Field(..., min_length=1)
    category: TaskCategoryId
    manifest_path: str = Field(..., description="Manifest CSV, relative to the data directory unless absolute")
    split: str = Field(default="test", description="Evaluation split the manifest covers")
    adapter: Optional[str] = Field(default=None, description="Name of the dataset adapter that emits the manifest")
    labels: List[Union[str, LabelSpec]] = Field(..., min_length=1)

    @field_validator("labels")
    @classmethod
    def validate_labels(cls, v: List[Union[str, LabelSpec]]) -> List[Union[str, LabelSpec]]:
        seen = set()
        for label in v:
            label_id = label if isinstance(label, str) else label.id
            if not str(label_id).strip():
                raise ValueError("label ids cannot be empty")
            if label_id in seen:
                raise ValueError(f"duplicate label '{label_id}'")
            seen.add(label_id)
        return v

    @property
    def class_labels(self) -> List[str]:
        return [label if isinstance(label, str) else label.id for label in self.labels]

    def entries(self) -> List[LabelEntry]:
        rows = []
        for label in self.labels:
            if isinstance(label, str):
                label_id, display = label, label
            else:
                label_id, display = label.id, label.display or label.id
            rows.append(LabelEntry(label_id=label_id, display_text=normalize_label(display), dataset_id=self.dataset_id))
        return rows


class TaxonomyConfig(BaseModel):
    """Top level of ``taxonomy.yaml``"""
    version: int = 1
    categories: List[TaskCategory]
    datasets: List[DatasetDescriptor]

    @model_validator(mode="after")
    def validate_config(self) -> "TaxonomyConfig":
        ids = [c.id for c in self.categories]
        if sorted(ids, key=lambda c: c.value) != sorted(TaskCategoryId, key=lambda c: c.value):
            raise ValueError("exactly the five task categories must be declared, each once")
        dataset_ids = [d.dataset_id for d in self.datasets]
        duplicates = {d for d in dataset_ids if dataset_ids.count(d) > 1}
        if duplicates:
            raise ValueError(f"duplicate dataset ids: {sorted(duplicates)}")
        return self
