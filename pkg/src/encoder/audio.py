import logging
from pathlib import Path

import numpy as np
import soundfile as sf

from src.errors import AudioDecodeError

logger = logging.getLogger(__name__)


def load_audio(path: Path, target_sr: int) -> np.ndarray:
    """Decode a clip to mono float32 at ``target_sr``."""
    path = Path(path)
    try:
        samples, sr = sf.read(str(path), dtype="float32", always_2d=True)
    except (sf.LibsndfileError, RuntimeError, OSError) as exc:
        raise AudioDecodeError(f"cannot decode {path}: {exc}") from exc
    if samples.shape[0] == 0:
        raise AudioDecodeError(f"{path} contains no samples")
    mono = samples.mean(axis=1) if samples.shape[1] > 1 else samples[:, 0]
    if sr != target_sr:
        mono = resample(mono, sr, target_sr)
    return np.ascontiguousarray(mono, dtype=np.float32)


def resample(samples: np.ndarray, orig_sr: int, target_sr: int) -> np.ndarray:
    # librosa pulls in numba; only needed when rates differ
    import librosa

    try:
        return librosa.resample(samples, orig_sr=orig_sr, target_sr=target_sr).astype(np.float32)
    except Exception as exc:
        raise AudioDecodeError(f"resampling {orig_sr} Hz -> {target_sr} Hz failed: {exc}") from exc
