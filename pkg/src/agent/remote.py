import logging
import re
from typing import List, Literal, Optional

import httpx
import openai
from pydantic_ai import Agent
from pydantic_ai.exceptions import ModelHTTPError, UnexpectedModelBehavior
from pydantic_ai.models import Model

from src.config import Settings
from src.errors import BackendUnavailable
from src.promptgen.grammar import GENERATED_GRAMMARS, SURFACES, clean_line
from src.schemas.prompt import Provenance
from src.schemas.taxonomy import TaskCategory
from src.utils.log import log_event

from .base import GeneratorBackend, get_llm
from .prompts import (
    ATTRIBUTE_REQUEST,
    POOL_SYSTEM_PROMPT,
    PROMPT_REQUEST,
    PROMPT_SYSTEM_PROMPT,
    SOURCE_REQUEST,
)

logger = logging.getLogger(__name__)

_TERM_SPLIT_RE = re.compile(r"[\n,;]")


class RemoteGenerator(GeneratorBackend):
    """Generator backed by an OpenAI-compatible chat endpoint.

    ``model`` overrides the endpoint model (tests pass a ``FunctionModel``).
    """

    provenance = Provenance.LLM

    def __init__(self, settings: Settings, model: Optional[Model] = None, temperature: float = 0.7):
        self.settings = settings
        self.name = f"llm:{settings.llm_model}"
        self.temperature = temperature
        self._model = model
        self._pool_agent: Optional[Agent] = None
        self._prompt_agent: Optional[Agent] = None

    def _resolve_model(self) -> Model:
        if self._model is None:
            self._model = get_llm(self.settings.llm_endpoint, self.settings.llm_model, self.settings.llm_api_key_env)
        return self._model

    def _agents(self):
        if self._pool_agent is None:
            model = self._resolve_model()
            forms = "\n".join(f"- {surface}" for grammar in GENERATED_GRAMMARS for surface in SURFACES[grammar])
            self._pool_agent = Agent(model=model, output_type=str, system_prompt=POOL_SYSTEM_PROMPT, retries=1)
            self._prompt_agent = Agent(
                model=model,
                output_type=str,
                system_prompt=PROMPT_SYSTEM_PROMPT.format(forms=forms),
                retries=1,
            )
        return self._pool_agent, self._prompt_agent

    async def _ask(self, agent: Agent, request: str) -> str:
        try:
            result = await agent.run(
                request,
                model_settings={"temperature": self.temperature, "timeout": self.settings.llm_timeout},
            )
        except ModelHTTPError as e:
            raise BackendUnavailable(
                f"generation endpoint {self.settings.llm_endpoint} answered HTTP {e.status_code}"
            ) from e
        except (openai.APIConnectionError, openai.APITimeoutError, httpx.HTTPError) as e:
            raise BackendUnavailable(f"generation endpoint {self.settings.llm_endpoint} unreachable: {e}") from e
        except UnexpectedModelBehavior as e:
            # counts as an empty round; the pipeline re-requests
            log_event(logger, "generator_bad_response", level=logging.WARNING, error=str(e))
            return ""
        return result.output or ""

    async def propose_terms(self, kind: Literal["attribute", "source"], category_descriptions: List[str],
                            count: int, exclude: List[str], round_index: int) -> List[str]:
        pool_agent, _ = self._agents()
        template = ATTRIBUTE_REQUEST if kind == "attribute" else SOURCE_REQUEST
        request = template.format(
            count=count,
            categories="\n".join(f"- {d}" for d in category_descriptions),
            exclude=", ".join(exclude) or "(none)",
        )
        text = await self._ask(pool_agent, request)
        terms = [clean_line(t) for t in _TERM_SPLIT_RE.split(text)]
        return [t for t in terms if t]

    async def propose_prompts(self, category: TaskCategory, attributes: List[str], sources: List[str],
                              count: int, exclude: List[str], round_index: int) -> List[str]:
        _, prompt_agent = self._agents()
        request = PROMPT_REQUEST.format(
            category=category.name,
            description=category.description,
            attributes=", ".join(attributes),
            sources=", ".join(sources),
            count=count,
            exclude="\n".join(exclude) or "(none)",
        )
        text = await self._ask(prompt_agent, request)
        return [line for line in text.splitlines() if line.strip()]
