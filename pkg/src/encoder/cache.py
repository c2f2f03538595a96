import json
import logging
import threading
from pathlib import Path
from typing import Dict, Optional

import numpy as np
from filelock import FileLock
from pydantic import ValidationError

from src.errors import CacheMismatch
from src.schemas.embedding import CacheHeader, Modality
from src.utils.log import log_event

logger = logging.getLogger(__name__)


class EmbeddingCache:
    """Content-addressed store of raw backend vectors.

    One JSON-lines file per (backend, modality); the first line is a
    :class:`CacheHeader`, every further line ``{"key": ..., "vector": [...]}``.
    Vectors are kept as float64 so a hit is bit-identical to the value that
    was written. Reads are lock-free after loading; writes are serialized
    in-process with a lock and across processes with a file lock.
    """

    def __init__(self, cache_dir: Path, backend_id: str, dimension: int):
        self.cache_dir = Path(cache_dir)
        self.backend_id = backend_id
        self.dimension = dimension
        self._lock = threading.Lock()
        self._entries: Dict[Modality, Dict[str, np.ndarray]] = {}

    def path_for(self, modality: Modality) -> Path:
        return self.cache_dir / f"{self.backend_id}.{Modality(modality).value}.jsonl"

    def _expected_header(self, modality: Modality) -> CacheHeader:
        return CacheHeader(backend_id=self.backend_id, modality=modality, dimension=self.dimension)

    def _load(self, modality: Modality) -> Dict[str, np.ndarray]:
        modality = Modality(modality)
        entries = self._entries.get(modality)
        if entries is not None:
            return entries
        with self._lock:
            if modality in self._entries:
                return self._entries[modality]
            entries = self._read(modality)
            self._entries[modality] = entries
            return entries

    def _read(self, modality: Modality) -> Dict[str, np.ndarray]:
        path = self.path_for(modality)
        entries: Dict[str, np.ndarray] = {}
        if not path.exists():
            return entries
        with open(path, "r", encoding="utf-8") as fp:
            first = fp.readline()
            self._check_header(first, modality, path)
            skipped = 0
            for line in fp:
                try:
                    record = json.loads(line)
                    vector = np.asarray(record["vector"], dtype=np.float64)
                except (ValueError, KeyError, TypeError):
                    # a torn trailing line from an interrupted write
                    skipped += 1
                    continue
                if vector.shape != (self.dimension,):
                    skipped += 1
                    continue
                entries[record["key"]] = vector
        log_event(logger, "cache_loaded", path=path, entries=len(entries), skipped=skipped, level=logging.DEBUG)
        return entries

    def _check_header(self, line: str, modality: Modality, path: Path) -> None:
        expected = self._expected_header(modality)
        try:
            header = CacheHeader.model_validate_json(line)
        except ValidationError as exc:
            raise CacheMismatch(f"{path}: missing or unreadable cache header") from exc
        if header != expected:
            raise CacheMismatch(
                f"{path}: cache belongs to backend={header.backend_id} modality={header.modality.value} "
                f"dimension={header.dimension}, expected backend={expected.backend_id} dimension={expected.dimension}"
            )

    def get(self, modality: Modality, key: str) -> Optional[np.ndarray]:
        vector = self._load(modality).get(key)
        return None if vector is None else vector.copy()

    def put_many(self, modality: Modality, vectors: Dict[str, np.ndarray]) -> None:
        modality = Modality(modality)
        if not vectors:
            return
        entries = self._load(modality)
        path = self.path_for(modality)
        path.parent.mkdir(parents=True, exist_ok=True)
        with self._lock, FileLock(str(path) + ".lock"):
            new = {k: np.asarray(v, dtype=np.float64) for k, v in vectors.items() if k not in entries}
            if not new:
                return
            fresh_file = not path.exists() or path.stat().st_size == 0
            if not fresh_file:
                with open(path, "r", encoding="utf-8") as fp:
                    self._check_header(fp.readline(), modality, path)
            with open(path, "a", encoding="utf-8", newline="\n") as fp:
                if fresh_file:
                    fp.write(self._expected_header(modality).model_dump_json() + "\n")
                for key, vector in new.items():
                    fp.write(json.dumps({"key": key, "vector": vector.tolist()}) + "\n")
            entries.update(new)

    def __len__(self) -> int:
        return sum(len(self._load(m)) for m in Modality)
