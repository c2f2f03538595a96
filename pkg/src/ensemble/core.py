"""Prompt ensembles and cosine classification."""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config import Averaging
from src.encoder.service import EmbeddingService, normalize
from src.errors import DimensionMismatch, ZeroVector
from src.promptgen.articles import ArticleTable
from src.promptgen.grammar import render, vanilla_prompt
from src.schemas.curation import PromptSet
from src.schemas.embedding import Embedding
from src.schemas.ensemble import ClassEnsemble, LabelScore, ScoreVector
from src.utils.hashing import sha256_text

ZERO_NORM = 1e-12

# identifies ensembles built from the single baseline prompt
VANILLA_HASH = sha256_text("vanilla:This is the sound of a <label>")

LabelText = Tuple[str, str]


def average(vectors: Sequence[np.ndarray], averaging: Averaging = "normalize_first") -> np.ndarray:
    """Mean of prompt vectors, renormalized to unit length.

    ``normalize_first`` normalizes every vector before averaging, ``raw_mean``
    averages the backend's raw vectors.
    """
    if not vectors:
        raise ValueError("cannot average an empty set of embeddings")
    if len(vectors) == 1:
        return normalize(vectors[0])
    stack = np.vstack([
        normalize(v) if averaging == "normalize_first" else np.asarray(v, dtype=np.float64) for v in vectors
    ])
    mean = stack.mean(axis=0)
    norm = np.linalg.norm(mean)
    if norm < ZERO_NORM:
        raise ZeroVector(f"mean of {len(vectors)} prompt embeddings has norm {norm:.3e}")
    return mean / norm


def _ensemble(label_id: str, vectors: Sequence[np.ndarray], promptset_hash: str,
              averaging: Averaging) -> ClassEnsemble:
    try:
        vector = average(vectors, averaging)
    except ZeroVector as exc:
        raise ZeroVector(f"class '{label_id}': {exc}") from exc
    return ClassEnsemble(
        label_id=label_id,
        vector=Embedding(values=vector),
        K_used=len(vectors),
        promptset_hash=promptset_hash,
    )


def ensemble_class(promptset: PromptSet, label_text: str, service: EmbeddingService,
                   label_id: Optional[str] = None, averaging: Averaging = "normalize_first",
                   articles: Optional[ArticleTable] = None) -> ClassEnsemble:
    """Render every prompt for one label, embed, average, renormalize."""
    if not promptset.prompts:
        raise ValueError("prompt set is empty")
    texts = [render(p, label_text, articles) for p in promptset.prompts]
    return _ensemble(label_id or label_text, service.text_vectors(texts), promptset.fingerprint(), averaging)


def build_ensembles(promptset: PromptSet, labels: List[LabelText], service: EmbeddingService,
                    averaging: Averaging = "normalize_first",
                    articles: Optional[ArticleTable] = None) -> List[ClassEnsemble]:
    """One ensemble per ``(label_id, display_text)``, embedding all prompts in one pass."""
    k = len(promptset.prompts)
    if k == 0:
        raise ValueError("prompt set is empty")
    texts = [render(p, text, articles) for _, text in labels for p in promptset.prompts]
    vectors = service.text_vectors(texts)
    fingerprint = promptset.fingerprint()
    return [
        _ensemble(label_id, vectors[i * k:(i + 1) * k], fingerprint, averaging)
        for i, (label_id, _) in enumerate(labels)
    ]


def vanilla_ensembles(labels: List[LabelText], service: EmbeddingService,
                      averaging: Averaging = "normalize_first",
                      articles: Optional[ArticleTable] = None) -> List[ClassEnsemble]:
    """Single-prompt ensembles of the baseline template, one per label."""
    texts = [vanilla_prompt(text, articles) for _, text in labels]
    vectors = service.text_vectors(texts)
    return [_ensemble(label_id, [vectors[i]], VANILLA_HASH, averaging) for i, (label_id, _) in enumerate(labels)]


def classify(audio_emb: Embedding, ensembles: List[ClassEnsemble]) -> Tuple[str, ScoreVector]:
    """Argmax cosine; ties go to the earliest ensemble."""
    if not ensembles:
        raise ValueError("no class ensembles to classify against")
    dimension = audio_emb.dimension
    for ensemble in ensembles:
        if ensemble.vector.dimension != dimension:
            raise DimensionMismatch(
                f"audio embedding has dimension {dimension}, ensemble '{ensemble.label_id}' has {ensemble.vector.dimension}"
            )
    norm = np.linalg.norm(audio_emb.values)
    if norm < ZERO_NORM:
        raise ZeroVector("audio embedding has zero length")
    audio = audio_emb.values / norm
    # row-wise dots: identical ensembles must score identically
    cosines = np.clip(np.array([np.dot(e.vector.values, audio) for e in ensembles]), -1.0, 1.0)
    best = int(np.argmax(cosines))
    scores = ScoreVector(
        scores=[LabelScore(label_id=e.label_id, cosine=float(c)) for e, c in zip(ensembles, cosines)]
    )
    return ensembles[best].label_id, scores


def classify_vanilla(audio_emb: Embedding, labels: List[LabelText], service: EmbeddingService,
                     averaging: Averaging = "normalize_first", articles: Optional[ArticleTable] = None) -> str:
    """Baseline decision: one ``This is the sound of <label>`` prompt per class."""
    label_id, _ = classify(audio_emb, vanilla_ensembles(labels, service, averaging, articles))
    return label_id
