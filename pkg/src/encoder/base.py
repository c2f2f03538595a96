from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.schemas.embedding import BackendInfo, Modality


class EncoderBackend(ABC):
    """Text/audio encoder behind the embedding service.

    Backends return raw (unnormalized) float vectors; normalization and
    caching happen in :class:`src.encoder.service.EmbeddingService`.
    """

    backend_id: str
    dimension: int
    sample_rate: int
    capabilities: Tuple[Modality, ...] = (Modality.TEXT, Modality.AUDIO)
    # True when a run seed changes the output (e.g. random crops)
    seed_sensitive: bool = False

    def preprocess(self, samples: np.ndarray) -> np.ndarray:
        """Backend-specific shaping of mono float32 samples at ``sample_rate``."""
        return np.ascontiguousarray(samples, dtype=np.float32)

    def reseed(self, seed: int) -> None:
        """Reset the backend's seeded components for one evaluation run."""

    @abstractmethod
    def encode_text(self, texts: List[str]) -> np.ndarray:
        """Return an (n, dimension) array, one row per text."""

    @abstractmethod
    def encode_audio(self, clips: List[np.ndarray]) -> np.ndarray:
        """Return an (n, dimension) array for already preprocessed clips."""

    def preprocessing_policy(self) -> Dict:
        return {"channels": "mono", "sample_rate": self.sample_rate}

    def describe(self) -> BackendInfo:
        return BackendInfo(
            backend_id=self.backend_id,
            dimension=self.dimension,
            sample_rate=self.sample_rate,
            capabilities=list(self.capabilities),
            seed_sensitive=self.seed_sensitive,
            preprocessing=self.preprocessing_policy(),
        )

    def cache_namespace(self) -> Optional[str]:
        """Name of the embedding cache files, or ``None`` when outputs must not be cached."""
        return self.backend_id
