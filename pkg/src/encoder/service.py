import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from src.errors import EncodeError, TSPEError
from src.schemas.embedding import Embedding, Modality
from src.utils.hashing import sha256_samples, sha256_text
from src.utils.log import log_event

from .audio import load_audio
from .base import EncoderBackend
from .cache import EmbeddingCache

logger = logging.getLogger(__name__)

AudioRef = Union[str, Path, np.ndarray]

ZERO_NORM = 1e-12


def normalize(vector: np.ndarray) -> np.ndarray:
    """L2-normalize in float64."""
    values = np.asarray(vector, dtype=np.float64)
    norm = np.linalg.norm(values)
    if not np.isfinite(norm) or norm < ZERO_NORM:
        raise EncodeError(f"backend returned a degenerate vector (norm={norm})")
    return values / norm


class EmbeddingService:
    """Order-preserving, cached embedding of texts and clips for one backend."""

    def __init__(self, backend: EncoderBackend, cache: Optional[EmbeddingCache] = None,
                 jobs: Optional[int] = None, batch_size: int = 32):
        self.backend = backend
        self.cache = cache
        self.jobs = jobs
        self.batch_size = batch_size

    def _lookup(self, modality: Modality, keys: List[str], inputs: Sequence,
                compute: Callable[[list], np.ndarray]) -> List[np.ndarray]:
        vectors: List[Optional[np.ndarray]] = [None] * len(keys)
        pending = {}
        for index, key in enumerate(keys):
            hit = self.cache.get(modality, key) if self.cache is not None else None
            if hit is not None:
                vectors[index] = hit
            elif key not in pending:
                pending[key] = index

        computed = {}
        pending_keys = list(pending)
        for start in range(0, len(pending_keys), self.batch_size):
            batch_keys = pending_keys[start:start + self.batch_size]
            batch = [inputs[pending[k]] for k in batch_keys]
            try:
                raw = compute(batch)
            except TSPEError:
                raise
            except Exception as exc:
                raise EncodeError(f"{self.backend.backend_id} failed to encode {modality.value}: {exc}") from exc
            raw = np.asarray(raw, dtype=np.float64)
            if raw.shape != (len(batch), self.backend.dimension):
                raise EncodeError(
                    f"{self.backend.backend_id} returned shape {raw.shape}, "
                    f"expected ({len(batch)}, {self.backend.dimension})"
                )
            computed.update({k: raw[i].copy() for i, k in enumerate(batch_keys)})

        if computed and self.cache is not None:
            self.cache.put_many(modality, computed)
        log_event(logger, "embedded", backend=self.backend.backend_id, modality=modality.value,
                  requested=len(keys), computed=len(computed), level=logging.DEBUG)
        return [v if v is not None else computed[keys[i]].copy() for i, v in enumerate(vectors)]

    def text_vectors(self, texts: List[str]) -> List[np.ndarray]:
        """Raw backend vectors for texts, in input order."""
        if Modality.TEXT not in self.backend.capabilities:
            raise EncodeError(f"backend {self.backend.backend_id} cannot encode text")
        for text in texts:
            if not isinstance(text, str) or not text.strip():
                raise ValueError("texts must be non-empty strings")
        keys = [sha256_text(t) for t in texts]
        return self._lookup(Modality.TEXT, keys, texts, self.backend.encode_text)

    def embed_text(self, texts: List[str]) -> List[Embedding]:
        return [Embedding(values=normalize(v)) for v in self.text_vectors(texts)]

    def _prepare(self, clip: AudioRef) -> np.ndarray:
        if isinstance(clip, np.ndarray):
            samples = np.ascontiguousarray(clip, dtype=np.float32)
        else:
            samples = load_audio(Path(clip), self.backend.sample_rate)
        return self.backend.preprocess(samples)

    def audio_vectors(self, clips: List[AudioRef]) -> List[np.ndarray]:
        if Modality.AUDIO not in self.backend.capabilities:
            raise EncodeError(f"backend {self.backend.backend_id} cannot encode audio")
        if self.jobs and self.jobs > 1 and len(clips) > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                prepared = list(pool.map(self._prepare, clips))
        else:
            prepared = [self._prepare(c) for c in clips]
        keys = [sha256_samples(p) for p in prepared]
        return self._lookup(Modality.AUDIO, keys, prepared, self.backend.encode_audio)

    def embed_audio(self, clips: List[AudioRef]) -> List[Embedding]:
        """One normalized embedding per clip, keyed by the preprocessed samples."""
        return [Embedding(values=normalize(v)) for v in self.audio_vectors(clips)]


def embed_text(service: EmbeddingService, texts: List[str]) -> List[Embedding]:
    return service.embed_text(texts)


def embed_audio(service: EmbeddingService, clips: List[AudioRef]) -> List[Embedding]:
    return service.embed_audio(clips)
