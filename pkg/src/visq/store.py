"""Composite feature extraction and the persisted feature index.

A store is an ordered collection of per-image feature vectors sharing one
extraction configuration.  On disk it is UTF-8 JSON lines: line 1 is a
header ``{"store_version": 1, "config": {...}}`` and each following line
is one entry.  Numbers are serialized with full round-trip precision, so
save followed by load is the identity, bit for bit.

Corpus directories follow the ``root/<class_label>/<image>`` convention;
files directly under the root get no label.  Undecodable files are
skipped with a warning rather than aborting the whole ingest.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .color import (
    ColorHistogram,
    LocalColorHistogram,
    QuantizationScheme,
    global_histogram,
    local_histograms,
)
from .errors import (
    EmptyCorpusError,
    MalformedRecordError,
    VersionMismatchError,
)
from .imaging import RawImage, decode_image, to_grayscale
from .texture import TextureMoments, gray_histogram, texture_moments
from .validation import check_positive_int

__all__ = [
    "STORE_VERSION",
    "ExtractionConfig",
    "FeatureVector",
    "FeatureStore",
    "extract_features",
    "ingest_directory",
    "save_store",
    "load_store",
]

logger = logging.getLogger(__name__)

STORE_VERSION = 1

_MOMENT_FIELDS = ("mean", "sigma", "smoothness", "third_moment", "uniformity", "entropy")


@dataclass(frozen=True)
class ExtractionConfig:
    """Which feature families to extract and with what parameters.

    The global color histogram is always extracted; the block histograms
    and texture moments are optional.
    """

    scheme: QuantizationScheme = QuantizationScheme()
    grid_rows: int = 4
    grid_cols: int = 4
    include_lch: bool = True
    include_texture: bool = True

    def __post_init__(self):
        check_positive_int(self.grid_rows, "grid_rows")
        check_positive_int(self.grid_cols, "grid_cols")

    def enabled_families(self) -> tuple:
        families = ["gch"]
        if self.include_lch:
            families.append("lch")
        if self.include_texture:
            families.append("texture")
        return tuple(families)

    def to_dict(self) -> dict:
        return {
            "h_bins": self.scheme.h_bins,
            "s_bins": self.scheme.s_bins,
            "v_bins": self.scheme.v_bins,
            "grid_rows": self.grid_rows,
            "grid_cols": self.grid_cols,
            "include_lch": self.include_lch,
            "include_texture": self.include_texture,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExtractionConfig":
        return cls(
            scheme=QuantizationScheme(
                int(data["h_bins"]), int(data["s_bins"]), int(data["v_bins"])
            ),
            grid_rows=int(data["grid_rows"]),
            grid_cols=int(data["grid_cols"]),
            include_lch=bool(data["include_lch"]),
            include_texture=bool(data["include_texture"]),
        )


@dataclass(frozen=True)
class FeatureVector:
    """Per-image composite feature record, the unit stored and ranked."""

    id: str
    path: str
    label: str | None
    gch: ColorHistogram
    lch: LocalColorHistogram | None = None
    texture: TextureMoments | None = None

    def has_family(self, family: str) -> bool:
        if family == "gch":
            return True
        if family == "lch":
            return self.lch is not None
        if family == "texture":
            return self.texture is not None
        raise ValueError(f"unknown feature family {family!r}")


@dataclass(frozen=True)
class FeatureStore:
    """Ordered, immutable collection of feature vectors plus their config."""

    config: ExtractionConfig
    entries: tuple = field(default_factory=tuple)
    version: int = STORE_VERSION

    def __post_init__(self):
        entries = tuple(self.entries)
        by_id = {e.id: e for e in entries}
        if len(by_id) != len(entries):
            raise ValueError("entry ids must be unique within a store")
        for entry in entries:
            _check_entry_against_config(entry, self.config)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_by_id", by_id)

    def __len__(self):
        return len(self.entries)

    def ids(self) -> list:
        return [e.id for e in self.entries]

    def get(self, entry_id: str) -> FeatureVector:
        """Look up an entry by id; raises KeyError when absent."""
        return self._by_id[entry_id]

    def labels(self) -> list:
        """Distinct labels present, sorted; None entries are excluded."""
        return sorted({e.label for e in self.entries if e.label is not None})


def _check_entry_against_config(entry: FeatureVector, config: ExtractionConfig):
    if entry.gch.scheme != config.scheme:
        raise ValueError(f"entry {entry.id!r} does not match the store scheme")
    if config.include_lch:
        if entry.lch is None:
            raise ValueError(f"entry {entry.id!r} is missing block histograms")
        if (entry.lch.grid_rows, entry.lch.grid_cols) != (
            config.grid_rows,
            config.grid_cols,
        ):
            raise ValueError(f"entry {entry.id!r} does not match the store grid")
    elif entry.lch is not None:
        raise ValueError(f"entry {entry.id!r} carries block histograms the config disables")
    if config.include_texture and entry.texture is None:
        raise ValueError(f"entry {entry.id!r} is missing texture moments")
    if not config.include_texture and entry.texture is not None:
        raise ValueError(f"entry {entry.id!r} carries texture moments the config disables")


def extract_features(
    img: RawImage,
    config: ExtractionConfig,
    id: str = "",
    path: str = "",
    label: str | None = None,
) -> FeatureVector:
    """Extract the configured feature families from one decoded image."""
    gch = global_histogram(img, config.scheme)
    lch = None
    if config.include_lch:
        lch = local_histograms(img, config.grid_rows, config.grid_cols, config.scheme)
    texture = None
    if config.include_texture:
        texture = texture_moments(gray_histogram(to_grayscale(img)))
    return FeatureVector(id=id, path=path, label=label, gch=gch, lch=lch, texture=texture)


def ingest_directory(root, config: ExtractionConfig):
    """Walk ``root`` and extract features for every decodable image.

    Returns ``(store, skipped)`` where skipped counts files that failed to
    decode.  Entry ids are paths relative to the root (POSIX separators)
    and entries are ordered lexicographically by id; the label is the
    immediate subdirectory name, or None for files directly under root.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {root}")
    entries = []
    skipped = 0
    files = sorted(p for p in root.rglob("*") if p.is_file())
    for file_path in files:
        rel = file_path.relative_to(root)
        try:
            img = decode_image(file_path.read_bytes())
        except Exception as exc:
            skipped += 1
            logger.warning("skipping %s: %s", rel, exc)
            continue
        label = rel.parts[0] if len(rel.parts) > 1 else None
        entries.append(
            extract_features(
                img,
                config,
                id=rel.as_posix(),
                path=str(file_path.resolve()),
                label=label,
            )
        )
    if not entries:
        raise EmptyCorpusError(f"no decodable images under {root}")
    entries.sort(key=lambda e: e.id)
    return FeatureStore(config=config, entries=tuple(entries)), skipped


def _entry_to_dict(entry: FeatureVector) -> dict:
    record = {
        "id": entry.id,
        "path": entry.path,
        "label": entry.label,
        "gch": entry.gch.values.tolist(),
    }
    if entry.lch is not None:
        record["lch"] = [block.values.tolist() for block in entry.lch.blocks]
    if entry.texture is not None:
        record["texture"] = {
            name: getattr(entry.texture, name) for name in _MOMENT_FIELDS
        }
    return record


def _entry_from_dict(record: dict, config: ExtractionConfig) -> FeatureVector:
    gch = ColorHistogram(config.scheme, np.array(record["gch"], dtype=np.float64))
    lch = None
    if record.get("lch") is not None:
        blocks = tuple(
            ColorHistogram(config.scheme, np.array(block, dtype=np.float64))
            for block in record["lch"]
        )
        lch = LocalColorHistogram(config.grid_rows, config.grid_cols, blocks)
    texture = None
    if record.get("texture") is not None:
        texture = TextureMoments(
            **{name: float(record["texture"][name]) for name in _MOMENT_FIELDS}
        )
    label = record.get("label")
    return FeatureVector(
        id=str(record["id"]),
        path=str(record.get("path", "")),
        label=None if label is None else str(label),
        gch=gch,
        lch=lch,
        texture=texture,
    )


def save_store(store: FeatureStore, out) -> None:
    """Write a store to disk in the line-delimited format."""
    out = Path(out)
    with out.open("w", encoding="utf-8") as fh:
        header = {"store_version": store.version, "config": store.config.to_dict()}
        fh.write(json.dumps(header) + "\n")
        for entry in store.entries:
            fh.write(json.dumps(_entry_to_dict(entry)) + "\n")


def load_store(path) -> FeatureStore:
    """Load and re-validate a store file; never trusts its contents."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MalformedRecordError(f"{path}: empty store file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(f"{path}: bad header: {exc}") from exc
    version = header.get("store_version")
    if version != STORE_VERSION:
        raise VersionMismatchError(
            f"{path}: unknown store version {version!r}, expected {STORE_VERSION}"
        )
    try:
        config = ExtractionConfig.from_dict(header["config"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedRecordError(f"{path}: bad header config: {exc}") from exc
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            entries.append(_entry_from_dict(json.loads(line), config))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise MalformedRecordError(f"{path}:{lineno}: {exc}") from exc
    try:
        return FeatureStore(config=config, entries=tuple(entries), version=version)
    except ValueError as exc:
        raise MalformedRecordError(f"{path}: {exc}") from exc
