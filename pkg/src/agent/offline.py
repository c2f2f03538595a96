import random
from typing import Dict, List, Literal, Optional, Tuple

from src.promptgen.articles import ArticleTable
from src.promptgen.grammar import GENERATED_GRAMMARS, SURFACES, bind
from src.schemas.prompt import GrammarId, Provenance, REQUIRED_SLOTS
from src.schemas.taxonomy import TaskCategory
from src.utils.hashing import seed_from

from .base import GeneratorBackend

SEED_ATTRIBUTES = ["quiet", "loud", "muted", "faint", "feeble"]
SEED_SOURCES = ["theater", "concert", "room", "opera", "street", "tunnel"]

ATTRIBUTE_VOCABULARY = [
    "melodious", "hushed", "gentle", "soft", "sharp", "booming", "rhythmic", "harmonic", "resonant",
    "distant", "echoing", "piercing", "deafening", "sudden", "steady", "rumbling", "crisp", "mellow",
    "vibrant", "shrill", "deep", "muffled", "clear", "intermittent", "soothing", "bright", "warm",
    "harsh", "dull", "metallic", "hollow", "thunderous", "delicate", "airy", "raspy", "smooth",
    "staccato", "droning", "pulsing", "low", "high-pitched", "noisy", "subtle", "crackling",
]

SOURCE_VOCABULARY = [
    "church", "concert hall", "orchestra", "studio", "stage", "park", "road", "city center", "subway",
    "office", "cafe", "restaurant", "beach", "parking lot", "university", "hall", "airport",
    "railway station", "construction site", "highway", "hospital", "home", "library", "festival",
    "forest", "market", "stadium", "garden", "kitchen", "classroom", "bar", "club", "harbor",
    "shopping mall", "bus station", "factory", "farm", "temple", "village", "living room",
]


class OfflineGenerator(GeneratorBackend):
    """Deterministic generator that needs no network.

    Pools start with the seed examples and continue with a seeded sample of a
    built-in vocabulary. Prompts are drawn without replacement from the
    grammar x surface x pool cross product, cycling through the three grammars
    in seeded order so every grammar is represented.
    """

    name = "offline"
    provenance = Provenance.OFFLINE

    def __init__(self, seed: int = 0, articles: Optional[ArticleTable] = None):
        self.seed = seed
        self.articles = articles

    async def propose_terms(self, kind: Literal["attribute", "source"], category_descriptions: List[str],
                            count: int, exclude: List[str], round_index: int) -> List[str]:
        seeds, vocabulary = (
            (SEED_ATTRIBUTES, ATTRIBUTE_VOCABULARY) if kind == "attribute" else (SEED_SOURCES, SOURCE_VOCABULARY)
        )
        rng = random.Random(seed_from(self.seed, kind, round_index))
        ordered = seeds + rng.sample(vocabulary, len(vocabulary))
        excluded = set(exclude)
        return [t for t in ordered if t not in excluded][:count]

    def _combinations(self, attributes: List[str], sources: List[str]) -> Dict[GrammarId, List[Tuple]]:
        combos: Dict[GrammarId, List[Tuple]] = {}
        for grammar in GENERATED_GRAMMARS:
            required = REQUIRED_SLOTS[grammar]
            attribute_choices = attributes if "attribute" in required else [None]
            source_choices = sources if "source" in required else [None]
            combos[grammar] = [
                (surface, attribute, source)
                for surface in SURFACES[grammar]
                for attribute in attribute_choices
                for source in source_choices
            ]
        return combos

    async def propose_prompts(self, category: TaskCategory, attributes: List[str], sources: List[str],
                              count: int, exclude: List[str], round_index: int) -> List[str]:
        rng = random.Random(seed_from(self.seed, category.id.value, round_index))
        excluded = set(exclude)
        remaining = {}
        for grammar, combos in self._combinations(attributes, sources).items():
            lines = [bind(surface, attribute, source, self.articles) for surface, attribute, source in combos]
            lines = [line for line in lines if line not in excluded]
            rng.shuffle(lines)
            remaining[grammar] = lines

        out: List[str] = []
        while len(out) < count:
            block = [g for g in GENERATED_GRAMMARS if remaining[g]]
            if not block:
                break
            rng.shuffle(block)
            for grammar in block:
                out.append(remaining[grammar].pop())
                if len(out) == count:
                    break
        return out
