"""Per-dataset adapters that turn a downloaded dataset into a manifest.

Each adapter reads the dataset's own packaging under ``root`` and yields
``(clip_path, raw_label)`` pairs with clip paths relative to ``root``. Raw
labels are matched case-insensitively against the taxonomy's label ids.
"""
import csv
import json
import logging
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from src.errors import ConfigError, ManifestError
from src.evaluation.manifest import write_manifest
from src.schemas.evaluation import ManifestRow
from src.taxonomy import Taxonomy
from src.utils.log import log_event

logger = logging.getLogger(__name__)

AUDIO_SUFFIXES = (".wav", ".au", ".flac", ".mp3", ".ogg")

Pairs = Iterator[Tuple[str, str]]


def _rel(path: Path, root: Path) -> str:
    return path.relative_to(root).as_posix()


def _require(path: Path) -> Path:
    if not path.exists():
        raise ManifestError(f"expected {path} in the dataset download")
    return path


def _audio_files(directory: Path) -> List[Path]:
    return sorted(p for p in directory.rglob("*") if p.is_file() and p.suffix.lower() in AUDIO_SUFFIXES)


def _first_existing(root: Path, *candidates: str) -> Path:
    for name in candidates:
        if (root / name).is_dir():
            return root / name
    return root


def _label_dirs(root: Path, base: Path) -> Pairs:
    for directory in sorted(p for p in base.iterdir() if p.is_dir()):
        for clip in _audio_files(directory):
            yield _rel(clip, root), directory.name


def esc50(root: Path) -> Pairs:
    with open(_require(root / "meta" / "esc50.csv"), newline="", encoding="utf-8") as fp:
        for record in csv.DictReader(fp):
            yield f"audio/{record['filename']}", record["category"]


def urbansound8k(root: Path) -> Pairs:
    with open(_require(root / "metadata" / "UrbanSound8K.csv"), newline="", encoding="utf-8") as fp:
        for record in csv.DictReader(fp):
            yield f"audio/fold{record['fold']}/{record['slice_file_name']}", record["class"]


def gtzan(root: Path) -> Pairs:
    yield from _label_dirs(root, _first_existing(root, "genres", "genres_original"))


def cochlscene(root: Path) -> Pairs:
    yield from _label_dirs(root, _require(root / "Test"))


def beijing_opera(root: Path) -> Pairs:
    yield from _label_dirs(root, root)


def _mridangam(root: Path) -> Iterator[Tuple[str, str, str]]:
    # <tonic>/<id>__<author>__<stroke>-<tonic>-<take>.wav
    for directory in sorted(p for p in root.iterdir() if p.is_dir()):
        for clip in _audio_files(directory):
            stroke = clip.stem.split("__")[-1].split("-")[0]
            yield _rel(clip, root), stroke, directory.name


def mridangam_stroke(root: Path) -> Pairs:
    for clip, stroke, _ in _mridangam(root):
        yield clip, stroke


def mridangam_tonic(root: Path) -> Pairs:
    for clip, _, tonic in _mridangam(root):
        yield clip, tonic


def _nsynth(root: Path, field: str) -> Pairs:
    base = _first_existing(root, "nsynth-test")
    with open(_require(base / "examples.json"), encoding="utf-8") as fp:
        examples = json.load(fp)
    for note, meta in sorted(examples.items()):
        yield _rel(base / "audio" / f"{note}.wav", root), meta[field]


def nsynth_instrument(root: Path) -> Pairs:
    yield from _nsynth(root, "instrument_family_str")


def nsynth_source(root: Path) -> Pairs:
    yield from _nsynth(root, "instrument_source_str")


def _tab_rows(path: Path) -> Iterator[List[str]]:
    with open(path, newline="", encoding="utf-8") as fp:
        for fields in csv.reader(fp, delimiter="\t"):
            if fields and fields[0] != "filename":
                yield fields


def tut2018(root: Path) -> Pairs:
    scenes = {fields[0]: fields[1] for fields in _tab_rows(_require(root / "meta.csv")) if len(fields) > 1}
    split = root / "evaluation_setup" / "fold1_evaluate.txt"
    if not split.is_file():
        yield from scenes.items()
        return
    for fields in _tab_rows(split):
        clip = fields[0]
        label = fields[1] if len(fields) > 1 else scenes.get(clip)
        if label is None:
            raise ManifestError(f"{split}: no scene label for {clip}")
        yield clip, label


def vocalsound(root: Path) -> Pairs:
    # <speaker>_<take>_<label>.wav; meta/te_meta.csv lists the test speakers
    audio = _first_existing(root, "audio_16k")
    speakers = None
    split = root / "meta" / "te_meta.csv"
    if split.is_file():
        with open(split, newline="", encoding="utf-8") as fp:
            speakers = {row[0].strip() for row in csv.reader(fp) if row}
    for clip in _audio_files(audio):
        speaker, _, label = clip.stem.rpartition("_")
        if speakers is not None and speaker.split("_")[0] not in speakers:
            continue
        yield _rel(clip, root), label


def sesa(root: Path) -> Pairs:
    # <label>_<index>.wav
    for clip in _audio_files(_first_existing(root, "test")):
        yield _rel(clip, root), clip.stem.split("_")[0]


ADAPTERS: Dict[str, Callable[[Path], Pairs]] = {
    "esc50": esc50,
    "urbansound8k": urbansound8k,
    "gtzan": gtzan,
    "cochlscene": cochlscene,
    "beijing_opera": beijing_opera,
    "mridangam_stroke": mridangam_stroke,
    "mridangam_tonic": mridangam_tonic,
    "nsynth_instrument": nsynth_instrument,
    "nsynth_source": nsynth_source,
    "tut2018": tut2018,
    "vocalsound": vocalsound,
    "sesa": sesa,
}


def collect_rows(dataset_id: str, root: Path, taxonomy: Taxonomy) -> List[ManifestRow]:
    """Run the dataset's adapter and map its raw labels onto registered label ids."""
    descriptor = taxonomy.descriptor(dataset_id)
    adapter = ADAPTERS.get(descriptor.adapter or "")
    if adapter is None:
        raise ConfigError(f"dataset {dataset_id} has no adapter (declared: {descriptor.adapter!r})")
    root = Path(root)
    if not root.is_dir():
        raise ManifestError(f"dataset root {root} does not exist")

    known = {label.lower(): label for label in descriptor.class_labels}
    rows, skipped = [], {}
    for clip, raw in adapter(root):
        label = known.get(raw.strip().lower())
        if label is None:
            skipped[raw] = skipped.get(raw, 0) + 1
            continue
        rows.append(ManifestRow(clip_path=clip, label_id=label))
    if skipped:
        log_event(logger, "adapter_skipped_labels", level=logging.WARNING, dataset=dataset_id,
                  labels=",".join(sorted(skipped)), clips=sum(skipped.values()))
    if not rows:
        raise ManifestError(f"adapter {descriptor.adapter} found no labelled clips for {dataset_id} under {root}")
    return rows


def prepare(dataset_id: str, root: Path, taxonomy: Taxonomy, out: Optional[Path] = None) -> Path:
    """Write the manifest of ``dataset_id`` (default: the taxonomy's manifest path)."""
    rows = collect_rows(dataset_id, root, taxonomy)
    target = Path(out) if out is not None else taxonomy.manifest_path(dataset_id)
    count = write_manifest(rows, target)
    log_event(logger, "manifest_written", dataset=dataset_id, clips=count, path=target)
    return target
