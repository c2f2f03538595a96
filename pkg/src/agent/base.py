import os
from abc import ABC, abstractmethod
from typing import List, Literal, Optional

from dotenv import load_dotenv
from pydantic_ai.models.openai import OpenAIModel
from pydantic_ai.providers.openai import OpenAIProvider

from src.errors import BackendUnavailable
from src.schemas.prompt import Provenance
from src.schemas.taxonomy import TaskCategory

load_dotenv()

# Global cached model instance; rebuilt only when endpoint or model name change
_llm_instance: Optional[OpenAIModel] = None
_llm_key: Optional[tuple] = None


class GeneratorBackend(ABC):
    """Source of raw text lines for pool and prompt generation.

    Backends only propose text; parsing, pool checks, deduplication and
    retries belong to the pipeline in ``src.promptgen``.
    """

    name: str = "generator"
    provenance: Provenance = Provenance.LLM

    @abstractmethod
    async def propose_terms(self, kind: Literal["attribute", "source"], category_descriptions: List[str],
                            count: int, exclude: List[str], round_index: int) -> List[str]:
        """Return up to ``count`` attribute or source phrases not in ``exclude``."""

    @abstractmethod
    async def propose_prompts(self, category: TaskCategory, attributes: List[str], sources: List[str],
                              count: int, exclude: List[str], round_index: int) -> List[str]:
        """Return up to ``count`` prompt lines with the label slot written as ``<label>``."""


def get_llm(endpoint: str, model_name: str, api_key_env: str) -> OpenAIModel:
    """Get cached OpenAI-compatible model instance for better performance."""
    global _llm_instance, _llm_key
    key = (endpoint, model_name, api_key_env)
    if _llm_instance is None or _llm_key != key:
        api_key = os.getenv(api_key_env)
        if not api_key:
            raise BackendUnavailable(f"environment variable {api_key_env} holding the API key is not set")
        _llm_instance = OpenAIModel(
            model_name,
            provider=OpenAIProvider(base_url=endpoint, api_key=api_key),
        )
        _llm_key = key
    return _llm_instance
