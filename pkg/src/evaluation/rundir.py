import csv
import logging
import shutil
from pathlib import Path
from typing import List, Optional

from filelock import FileLock, Timeout

from src.config import RunConfig
from src.errors import RunDirLocked
from src.schemas.evaluation import ClipPrediction, EvaluationReport
from src.utils.yaml_config import dump_yaml

logger = logging.getLogger(__name__)

CONFIG_FILE = "config.yaml"
MANIFEST_FILE = "manifest.csv"
REPORT_FILE = "report.json"


class RunDirectory:
    """Output directory owned by exactly one evaluation process.

    Layout: ``config.yaml`` (run snapshot), ``manifest.csv`` (copy),
    ``predictions_run{r}.csv`` per run and ``report.json``.
    """

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock: Optional[FileLock] = None

    def __enter__(self) -> "RunDirectory":
        self.path.mkdir(parents=True, exist_ok=True)
        lock = FileLock(str(self.path / ".lock"))
        try:
            lock.acquire(timeout=0)
        except Timeout:
            raise RunDirLocked(f"run directory {self.path} is in use by another evaluation") from None
        self._lock = lock
        return self

    def __exit__(self, *exc_info) -> None:
        if self._lock is not None:
            self._lock.release()
            self._lock = None

    def write_config(self, run_config: RunConfig) -> Path:
        target = self.path / CONFIG_FILE
        dump_yaml(run_config.model_dump(mode="json"), target)
        return target

    def copy_manifest(self, manifest_path: Path) -> Path:
        target = self.path / MANIFEST_FILE
        if Path(manifest_path).resolve() != target.resolve():
            shutil.copyfile(manifest_path, target)
        return target

    def write_predictions(self, run_index: int, predictions: List[ClipPrediction]) -> Path:
        target = self.path / f"predictions_run{run_index}.csv"
        with open(target, "w", newline="", encoding="utf-8") as fp:
            writer = csv.writer(fp, lineterminator="\n")
            writer.writerow(["clip", "gold", "predicted", "top_cosine"])
            for p in predictions:
                writer.writerow([p.clip, p.gold, p.predicted, repr(p.top_cosine)])
        return target

    def write_report(self, report: EvaluationReport) -> Path:
        target = self.path / REPORT_FILE
        target.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return target
