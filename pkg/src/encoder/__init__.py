from .audio import load_audio
from .base import EncoderBackend
from .cache import EmbeddingCache
from .registry import BACKENDS, create_backend
from .service import EmbeddingService, embed_audio, embed_text, normalize

__all__ = [
    "load_audio",
    "EncoderBackend",
    "EmbeddingCache",
    "BACKENDS",
    "create_backend",
    "EmbeddingService",
    "embed_audio",
    "embed_text",
    "normalize",
]
