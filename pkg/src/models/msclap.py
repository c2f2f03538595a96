import logging
import math
import random
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from src.encoder.base import EncoderBackend
from src.errors import BackendLoadError
from src.utils.hashing import sha256_samples, seed_from
from src.utils.log import log_event

logger = logging.getLogger(__name__)

CLIP_SECONDS = {"2022": 5, "2023": 7}


class MSCLAPBackend(EncoderBackend):
    """MS-CLAP checkpoints through the ``msclap`` package.

    Clips are cut to the checkpoint's training length: shorter clips are
    repeat-padded, longer ones cropped at an offset drawn from the run seed
    and the clip content. The crop is the backend's only seeded component.
    """

    dimension = 1024
    sample_rate = 44100
    seed_sensitive = True

    def __init__(self, version: str, checkpoint: Optional[Path] = None, use_cuda: bool = False, seed: int = 0):
        if version not in CLIP_SECONDS:
            raise BackendLoadError(f"unknown MS-CLAP version '{version}'; expected one of {sorted(CLIP_SECONDS)}")
        self.version = version
        self.backend_id = f"msclap{version}"
        self.checkpoint = Path(checkpoint) if checkpoint else None
        self.use_cuda = use_cuda
        self.clip_samples = CLIP_SECONDS[version] * self.sample_rate
        self._seed = seed
        self._model = None

    def _load(self):
        if self._model is not None:
            return self._model
        try:
            from msclap import CLAP
        except ImportError as e:
            raise BackendLoadError(
                "the msclap package is not installed; install requirements-models.txt to use MS-CLAP"
            ) from e
        if self.checkpoint is not None and not self.checkpoint.exists():
            raise BackendLoadError(f"checkpoint {self.checkpoint} does not exist")
        try:
            self._model = CLAP(
                version=self.version,
                model_fp=str(self.checkpoint) if self.checkpoint else None,
                use_cuda=self.use_cuda,
            )
        except Exception as e:
            raise BackendLoadError(f"cannot load MS-CLAP {self.version}: {e}") from e
        log_event(logger, "backend_loaded", backend=self.backend_id, checkpoint=self.checkpoint or "default")
        return self._model

    def reseed(self, seed: int) -> None:
        self._seed = seed
        try:
            import torch

            torch.manual_seed(seed % 2**63)
        except ImportError:
            pass

    def preprocess(self, samples: np.ndarray) -> np.ndarray:
        samples = np.ascontiguousarray(samples, dtype=np.float32)
        length = samples.shape[0]
        if length == 0:
            return np.zeros(self.clip_samples, dtype=np.float32)
        if length < self.clip_samples:
            repeats = math.ceil(self.clip_samples / length)
            return np.tile(samples, repeats)[: self.clip_samples]
        if length > self.clip_samples:
            rng = random.Random(seed_from(self._seed, sha256_samples(samples)))
            offset = rng.randrange(length - self.clip_samples + 1)
            return samples[offset:offset + self.clip_samples].copy()
        return samples

    def encode_text(self, texts: List[str]) -> np.ndarray:
        import torch

        model = self._load()
        with torch.no_grad():
            embeddings = model.get_text_embeddings(list(texts))
        return embeddings.detach().cpu().numpy().astype(np.float64)

    def encode_audio(self, clips: List[np.ndarray]) -> np.ndarray:
        import torch

        model = self._load()
        batch = torch.from_numpy(np.stack(clips)).reshape(len(clips), 1, -1)
        if self.use_cuda and torch.cuda.is_available():
            batch = batch.cuda()
        with torch.no_grad():
            embeddings = model._get_audio_embeddings(batch)
        return embeddings.detach().cpu().numpy().astype(np.float64)

    def preprocessing_policy(self) -> Dict:
        return {
            "channels": "mono",
            "sample_rate": self.sample_rate,
            "clip_seconds": CLIP_SECONDS[self.version],
            "short_clips": "repeat-pad",
            "long_clips": "random crop seeded by (run seed, clip content)",
        }
