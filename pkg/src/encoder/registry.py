from typing import Optional

from src.config import Settings
from src.errors import ConfigError

from .base import EncoderBackend

BACKENDS = ("mock", "mock-planted", "msclap2022", "msclap2023")


def create_backend(backend_id: str, settings: Settings, seed: Optional[int] = None) -> EncoderBackend:
    """Instantiate an encoder backend by id."""
    # backends import src.encoder.base, so they are resolved here rather than at module load
    from src.models.mock import MockBackend
    from src.models.msclap import MSCLAPBackend

    seed = settings.seed if seed is None else seed
    if backend_id == "mock":
        return MockBackend(seed=seed)
    if backend_id == "mock-planted":
        return MockBackend(seed=seed, planted=True)
    if backend_id in ("msclap2022", "msclap2023"):
        return MSCLAPBackend(
            version=backend_id[len("msclap"):],
            checkpoint=settings.msclap_checkpoint,
            use_cuda=settings.msclap_use_cuda,
            seed=seed,
        )
    raise ConfigError(f"unknown backend '{backend_id}'; expected one of {', '.join(BACKENDS)}")
