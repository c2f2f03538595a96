from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional

from src.config import DATA_DIR
from src.errors import ConfigError
from src.utils.yaml_config import load_yaml, strip_lines

VOWELS = frozenset("aeiou")


@dataclass(frozen=True)
class ArticleTable:
    """Indefinite-article rules: explicit overrides, then the vowel-initial heuristic."""

    force_a: frozenset = frozenset()
    force_an: frozenset = frozenset()
    none: frozenset = frozenset()

    def article_for(self, phrase: str) -> str:
        """Return "a", "an" or "" (no article) for the phrase that follows."""
        text = " ".join(phrase.lower().split())
        if not text:
            return "a"
        if text in self.none:
            return ""
        first = text.split(" ", 1)[0]
        for key in (text, first):
            if key in self.force_a:
                return "a"
            if key in self.force_an:
                return "an"
        return "an" if text[0] in VOWELS else "a"

    @classmethod
    def load(cls, path: Path) -> "ArticleTable":
        raw = strip_lines(load_yaml(path)) or {}
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a mapping with keys a/an/none")
        unknown = set(raw) - {"a", "an", "none"}
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")

        def words(key: str) -> frozenset:
            return frozenset(" ".join(str(w).lower().split()) for w in raw.get(key) or [])

        return cls(force_a=words("a"), force_an=words("an"), none=words("none"))


@lru_cache(maxsize=4)
def load_articles(path: Optional[Path] = None) -> ArticleTable:
    return ArticleTable.load(path or DATA_DIR / "articles.yaml")
