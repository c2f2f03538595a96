import csv
import logging
from pathlib import Path
from typing import Iterable, List, Optional

from src.errors import ManifestError
from src.schemas.evaluation import DatasetManifest, ManifestRow
from src.taxonomy import Taxonomy
from src.utils.log import log_event

logger = logging.getLogger(__name__)

HEADER = ("clip_path", "label")
_MAX_LISTED = 5


def _listing(items: List[str]) -> str:
    shown = ", ".join(items[:_MAX_LISTED])
    return shown + (f" (+{len(items) - _MAX_LISTED} more)" if len(items) > _MAX_LISTED else "")


def load_manifest(path: Path, dataset_id: str, taxonomy: Taxonomy, root: Optional[Path] = None,
                  check_files: bool = True) -> DatasetManifest:
    """Read a ``clip_path,label`` manifest and check it against the label registry.

    Clip paths are relative to ``root`` (default: the manifest's directory).
    """
    path = Path(path)
    descriptor = taxonomy.descriptor(dataset_id)
    known = set(descriptor.class_labels)
    try:
        with open(path, newline="", encoding="utf-8") as fp:
            reader = csv.DictReader(fp)
            if reader.fieldnames is None or tuple(f.strip() for f in reader.fieldnames[:2]) != HEADER:
                raise ManifestError(f"{path}:1: header must be '{','.join(HEADER)}', got {reader.fieldnames}")
            rows, unknown, duplicates, seen = [], [], [], set()
            for line, record in enumerate(reader, start=2):
                clip = (record.get("clip_path") or "").strip()
                label = (record.get("label") or "").strip()
                if not clip or not label:
                    raise ManifestError(f"{path}:{line}: empty clip_path or label")
                if label not in known:
                    unknown.append(f"{label} (line {line})")
                if clip in seen:
                    duplicates.append(f"{clip} (line {line})")
                seen.add(clip)
                rows.append(ManifestRow(clip_path=clip, label_id=label))
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc

    if unknown:
        raise ManifestError(f"{path}: labels not registered for {dataset_id}: {_listing(unknown)}")
    if duplicates:
        raise ManifestError(f"{path}: duplicate clip paths: {_listing(duplicates)}")
    if not rows:
        raise ManifestError(f"{path}: manifest lists no clips")

    manifest = DatasetManifest(
        dataset_id=dataset_id,
        split=descriptor.split,
        root=Path(root) if root is not None else path.parent,
        rows=rows,
    )
    if check_files:
        missing = [row.clip_path for row in manifest.rows if not manifest.resolve(row.clip_path).is_file()]
        if missing:
            raise ManifestError(f"{len(missing)} clips of {dataset_id} missing under {manifest.root}: {_listing(missing)}")
    log_event(logger, "manifest_loaded", dataset=dataset_id, clips=len(rows), root=manifest.root)
    return manifest


def write_manifest(rows: Iterable[ManifestRow], path: Path) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", newline="", encoding="utf-8") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(HEADER)
        for row in rows:
            writer.writerow([row.clip_path, row.label_id])
            count += 1
    return count
