from pathlib import Path

from pydantic import ValidationError

from src.errors import ConfigError, MismatchedRuns
from src.schemas.evaluation import ComparisonResult, EvaluationReport


def compare(vanilla: EvaluationReport, tspe: EvaluationReport) -> ComparisonResult:
    """``tspe.accuracy - vanilla.accuracy`` in absolute percentage points."""
    if vanilla.dataset_id != tspe.dataset_id or vanilla.backend_id != tspe.backend_id:
        raise MismatchedRuns(
            f"cannot compare {vanilla.dataset_id}/{vanilla.backend_id} with {tspe.dataset_id}/{tspe.backend_id}"
        )
    return ComparisonResult(dataset_id=vanilla.dataset_id, backend_id=vanilla.backend_id, vanilla=vanilla, tspe=tspe)


def load_report(path: Path) -> EvaluationReport:
    path = Path(path)
    try:
        return EvaluationReport.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read report {path}: {exc}") from exc
    except ValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(p) for p in error.get("loc", ())) or "<root>"
        raise ConfigError(f"{path}: field '{field}': {error.get('msg')}") from exc
