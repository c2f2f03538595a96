from src.config import Settings
from src.errors import ConfigError
from src.promptgen.articles import load_articles

from .base import GeneratorBackend, get_llm
from .offline import OfflineGenerator
from .remote import RemoteGenerator

GENERATORS = ("offline", "remote")


def get_generator(name: str, settings: Settings) -> GeneratorBackend:
    """Instantiate a generator backend by its CLI name."""
    if name == "offline":
        return OfflineGenerator(seed=settings.seed, articles=load_articles(settings.articles_path))
    if name == "remote":
        return RemoteGenerator(settings)
    raise ConfigError(f"unknown generator '{name}'; expected one of {', '.join(GENERATORS)}")


__all__ = ["GeneratorBackend", "OfflineGenerator", "RemoteGenerator", "get_generator", "get_llm", "GENERATORS"]
