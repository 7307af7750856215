"""Shared builders for synthetic images, corpora, and planted feature stores."""

from __future__ import annotations

import numpy as np
import pytest
from PIL import Image

from visq.color import ColorHistogram, QuantizationScheme
from visq.imaging import RawImage
from visq.store import ExtractionConfig, FeatureStore, FeatureVector


def solid_image(rgb, height=8, width=8) -> RawImage:
    px = np.zeros((height, width, 3), dtype=np.uint8)
    px[:, :] = rgb
    return RawImage(px)


def image_from_array(arr) -> RawImage:
    return RawImage(np.asarray(arr, dtype=np.uint8))


def random_image(rng, height=16, width=16) -> RawImage:
    return RawImage(rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8))


def write_png(path, pixels):
    Image.fromarray(np.asarray(pixels, dtype=np.uint8)).save(path)


def build_corpus(root, classes, size=(16, 16), seed=0):
    """Write root/<label>/<label><i>.png per class; colors jittered around a base.

    classes: mapping label -> (base_rgb, count).
    """
    rng = np.random.default_rng(seed)
    root.mkdir(parents=True, exist_ok=True)
    for label, (base, count) in classes.items():
        d = root / label
        d.mkdir()
        for i in range(count):
            px = np.clip(
                np.array(base, dtype=np.int64)
                + rng.integers(-18, 19, size=(size[0], size[1], 3)),
                0,
                255,
            ).astype(np.uint8)
            write_png(d / f"{label}{i}.png", px)
    return root


def planted_store(rows, bins=4):
    """Store of gch-only entries with hand-chosen histogram values.

    rows: iterable of (id, label, values); values must sum to 1.
    """
    scheme = QuantizationScheme(bins, 1, 1)
    config = ExtractionConfig(
        scheme=scheme, include_lch=False, include_texture=False
    )
    entries = [
        FeatureVector(
            id=i, path="", label=lbl, gch=ColorHistogram(scheme, tuple(vals))
        )
        for i, lbl, vals in rows
    ]
    return FeatureStore(config=config, entries=tuple(entries))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def corpus_dir(tmp_path):
    """Two visually distant classes, three images each."""
    return build_corpus(
        tmp_path / "corpus",
        {"red": ((205, 30, 30), 3), "blue": ((30, 40, 205), 3)},
    )


@pytest.fixture
def indexed_store(corpus_dir):
    from visq.store import ingest_directory

    store, skipped = ingest_directory(corpus_dir, ExtractionConfig())
    assert skipped == 0
    return store


@pytest.fixture
def store_file(indexed_store, tmp_path):
    from visq.store import save_store

    path = tmp_path / "store.jsonl"
    save_store(indexed_store, path)
    return path
