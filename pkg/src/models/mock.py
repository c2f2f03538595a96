import logging
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.encoder.base import EncoderBackend
from src.promptgen.grammar import extract_label as parse_label
from src.schemas.taxonomy import normalize_label
from src.utils.hashing import sha256_samples, seed_from
from src.utils.log import log_event

logger = logging.getLogger(__name__)

LabelExtractor = Callable[[str], Optional[str]]


class MockBackend(EncoderBackend):
    """Deterministic stand-in encoder.

    Hash mode: every text or clip maps to a Gaussian vector seeded by
    (backend seed, modality, content), so embeddings are reproducible across
    processes. Planted mode additionally assigns class ``c`` the basis
    direction ``e_c``: prompts whose label is planted embed to ``e_c`` plus a
    small seeded perturbation, planted clips embed to exactly ``e_c``.
    """

    sample_rate = 16000

    def __init__(self, seed: int = 0, dimension: int = 64, planted: bool = False,
                 extract_label: Optional[LabelExtractor] = None, noise: float = 0.1):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.seed = seed
        self.dimension = dimension
        self.planted = planted
        self.noise = noise
        self.backend_id = "mock-planted" if planted else "mock"
        self._extract_label = extract_label or parse_label
        self._label_index: Dict[str, int] = {}
        self._audio_index: Dict[str, int] = {}

    def _hash_vector(self, modality: str, content: str) -> np.ndarray:
        rng = np.random.default_rng(seed_from(self.seed, modality, content))
        return rng.standard_normal(self.dimension)

    def _direction(self, index: int) -> np.ndarray:
        vector = np.zeros(self.dimension)
        vector[index] = 1.0
        return vector

    def plant(self, label_texts: List[str], labelled_clips: Iterable[Tuple[np.ndarray, int]]) -> None:
        """Assign each label a basis direction and register which clip belongs to which label."""
        if len(label_texts) > self.dimension:
            raise ValueError(f"cannot plant {len(label_texts)} orthogonal classes in dimension {self.dimension}")
        self._label_index = {normalize_label(t): i for i, t in enumerate(label_texts)}
        self._audio_index = {sha256_samples(self.preprocess(samples)): index for samples, index in labelled_clips}
        log_event(logger, "mock_planted", labels=len(self._label_index), clips=len(self._audio_index))

    def encode_text(self, texts: List[str]) -> np.ndarray:
        rows = []
        for text in texts:
            index = None
            if self.planted:
                label = self._extract_label(text)
                index = self._label_index.get(normalize_label(label)) if label else None
            if index is None:
                rows.append(self._hash_vector("text", text))
                continue
            perturbation = self._hash_vector("text", text)
            perturbation /= np.linalg.norm(perturbation)
            rows.append(self._direction(index) + self.noise * perturbation)
        return np.vstack(rows)

    def encode_audio(self, clips: List[np.ndarray]) -> np.ndarray:
        rows = []
        for clip in clips:
            key = sha256_samples(clip)
            index = self._audio_index.get(key) if self.planted else None
            rows.append(self._direction(index) if index is not None else self._hash_vector("audio", key))
        return np.vstack(rows)

    def preprocessing_policy(self) -> Dict:
        return {"channels": "mono", "sample_rate": self.sample_rate, "clip_length": "unchanged",
                "seed": self.seed, "planted": self.planted}

    def cache_namespace(self) -> Optional[str]:
        # planted vectors depend on the dataset being evaluated
        if self.planted:
            return None
        return f"{self.backend_id}-seed{self.seed}-d{self.dimension}"
