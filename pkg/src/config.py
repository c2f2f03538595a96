from pathlib import Path
from typing import Any, Dict, Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.errors import ConfigError
from src.utils.yaml_config import load_yaml, strip_lines

load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = PROJECT_ROOT / "data"

Averaging = Literal["normalize_first", "raw_mean"]

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class Settings(BaseSettings):
    """Process-wide settings.

    Values come from (highest first) explicit overrides, the ``--config`` YAML
    file, ``TSPE_*`` environment variables / ``.env``, then the defaults below.
    """

    model_config = SettingsConfigDict(env_prefix="TSPE_", env_file=".env", extra="ignore")

    data_dir: Path = DATA_DIR
    taxonomy_path: Path = DATA_DIR / "taxonomy.yaml"
    pools_path: Path = DATA_DIR / "pools.yaml"
    rules_path: Path = DATA_DIR / "rules.yaml"
    articles_path: Path = DATA_DIR / "articles.yaml"
    cache_dir: Optional[Path] = PROJECT_ROOT / ".cache" / "embeddings"
    dataset_roots: Dict[str, Path] = Field(default_factory=dict)

    seed: int = 0
    jobs: Optional[int] = None
    averaging: Averaging = "normalize_first"

    # remote prompt generation (OpenAI-compatible chat endpoint)
    llm_endpoint: str = "https://api.openai.com/v1"
    llm_model: str = "gpt-4"
    llm_api_key_env: str = "OPENAI_API_KEY"
    llm_timeout: float = 60.0

    msclap_checkpoint: Optional[Path] = None
    msclap_use_cuda: bool = False

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v: int) -> int:
        if not INT64_MIN <= v <= INT64_MAX:
            raise ValueError("seed must fit in a signed 64-bit integer")
        return v

    @field_validator("jobs")
    @classmethod
    def validate_jobs(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError("jobs must be >= 1")
        return v


def load_settings(config_path: Optional[Path] = None, **overrides: Any) -> Settings:
    """Build :class:`Settings` from an optional YAML file plus explicit overrides.

    ``None`` overrides are ignored so unset CLI flags fall through.
    """
    values: Dict[str, Any] = {}
    if config_path is not None:
        raw = strip_lines(load_yaml(config_path))
        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise ConfigError(f"{config_path}: top level must be a mapping")
        base = Path(config_path).resolve().parent
        for key, value in raw.items():
            if key.endswith(("_path", "_dir")) and isinstance(value, str):
                value = _resolve(base, value)
            if key == "dataset_roots" and isinstance(value, dict):
                value = {k: _resolve(base, v) for k, v in value.items()}
            values[key] = value
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Settings(**values)
    except ValueError as exc:
        raise ConfigError(f"invalid settings: {exc}") from exc


def _resolve(base: Path, value: str) -> Path:
    path = Path(value).expanduser()
    return path if path.is_absolute() else base / path


class RunConfig(BaseModel):
    """Snapshot of everything needed to re-run one evaluation."""

    dataset_id: str
    backend_id: str
    condition: Literal["vanilla", "tspe"]
    runs: int = Field(default=5, ge=1)
    seed: int = 0
    taxonomy_path: Path
    manifest_path: Path
    dataset_root: Path
    out_dir: Path
    cache_dir: Optional[Path] = None
    promptset_path: Optional[Path] = None
    promptset_hash: Optional[str] = None
    articles_path: Optional[Path] = None
    averaging: Averaging = "normalize_first"
    jobs: Optional[int] = None
    backend_config: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v: int) -> int:
        if not INT64_MIN <= v <= INT64_MAX:
            raise ValueError("seed must fit in a signed 64-bit integer")
        return v

    def validate_paths(self) -> None:
        """All referenced inputs must exist when the run starts."""
        required = {
            "taxonomy_path": self.taxonomy_path,
            "manifest_path": self.manifest_path,
            "dataset_root": self.dataset_root,
        }
        if self.promptset_path is not None:
            required["promptset_path"] = self.promptset_path
        if self.articles_path is not None:
            required["articles_path"] = self.articles_path
        missing = [f"{name}={path}" for name, path in required.items() if not Path(path).exists()]
        if missing:
            raise ConfigError(f"run config references missing paths: {', '.join(missing)}")
