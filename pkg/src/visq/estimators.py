"""Scikit-learn style estimators wrapping the retrieval engine.

``ImageFeaturizer`` is a stateless transformer turning images into flat
numeric feature rows, so the extracted features compose with the wider
ecosystem (PCA, clustering, sklearn's own neighbor searches).
``ImageRetriever`` follows the NearestNeighbors idiom: fit on a corpus,
then ``kneighbors`` / ``predict`` / ``query`` against it.

Images are accepted in several forms everywhere: a decoded ``RawImage``,
a ``(h, w, 3)`` uint8 array, a filesystem path, or raw encoded bytes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .color import QuantizationScheme
from .imaging import RawImage, decode_image
from .metrics import MetricSpec
from .query import QuerySpec, rank
from .store import ExtractionConfig, FeatureStore, FeatureVector, extract_features

__all__ = ["ImageFeaturizer", "ImageRetriever", "coerce_image"]


def coerce_image(source) -> RawImage:
    """Accept a RawImage, pixel array, encoded bytes, or path."""
    if isinstance(source, RawImage):
        return source
    if isinstance(source, (bytes, bytearray)):
        return decode_image(bytes(source))
    if isinstance(source, (str, Path)):
        return decode_image(Path(source).read_bytes())
    if isinstance(source, np.ndarray):
        return RawImage(source)
    raise TypeError(f"cannot interpret {type(source).__name__} as an image")


class ImageFeaturizer(TransformerMixin, BaseEstimator):
    """Transformer from images to color/texture feature rows.

    Parameters mirror the extraction configuration: per-axis histogram
    bin counts, the block grid, and the optional feature families.
    """

    def __init__(
        self,
        h_bins=16,
        s_bins=4,
        v_bins=4,
        grid_rows=4,
        grid_cols=4,
        include_lch=True,
        include_texture=True,
    ):
        self.h_bins = h_bins
        self.s_bins = s_bins
        self.v_bins = v_bins
        self.grid_rows = grid_rows
        self.grid_cols = grid_cols
        self.include_lch = include_lch
        self.include_texture = include_texture

    def _config(self) -> ExtractionConfig:
        return ExtractionConfig(
            scheme=QuantizationScheme(self.h_bins, self.s_bins, self.v_bins),
            grid_rows=self.grid_rows,
            grid_cols=self.grid_cols,
            include_lch=self.include_lch,
            include_texture=self.include_texture,
        )

    def fit(self, X=None, y=None):
        """Validate parameters; the transformer itself learns nothing."""
        self.config_ = self._config()
        return self

    def extract(self, X) -> list:
        """Structured feature vectors for a sequence of images."""
        if not hasattr(self, "config_"):
            raise NotFittedError(
                "this ImageFeaturizer is not fitted yet; call fit() first"
            )
        return [extract_features(coerce_image(item), self.config_) for item in X]

    def transform(self, X) -> np.ndarray:
        """Flat numeric rows: GCH bins, then LCH blocks, then moments."""
        return np.stack([self._flatten(fv) for fv in self.extract(X)])

    @staticmethod
    def _flatten(fv: FeatureVector) -> np.ndarray:
        parts = [fv.gch.values]
        if fv.lch is not None:
            parts.extend(block.values for block in fv.lch.blocks)
        if fv.texture is not None:
            parts.append(fv.texture.as_vector())
        return np.concatenate(parts)


class ImageRetriever(BaseEstimator):
    """Nearest-image search over a fitted corpus.

    ``fit`` accepts either a sequence of images with optional labels or a
    prebuilt ``FeatureStore``.  ``kneighbors`` mirrors sklearn's
    NearestNeighbors output shape; ``predict`` returns the label of each
    query's closest stored image.
    """

    def __init__(self, metric="l1", mk=None, weights=None, featurizer=None):
        self.metric = metric
        self.mk = mk
        self.weights = weights
        self.featurizer = featurizer

    def _featurizer(self) -> ImageFeaturizer:
        return self.featurizer if self.featurizer is not None else ImageFeaturizer()

    def _spec(self, k: int) -> QuerySpec:
        metric = MetricSpec(self.metric, self.mk)
        weights = self.weights
        if weights is None:
            families = self.store_.config.enabled_families()
            if metric.kind in ("bray_curtis", "hamming"):
                families = tuple(f for f in families if f != "texture")
            weights = {family: 1.0 for family in families}
        return QuerySpec(metric=metric, k=k, weights=weights)

    def fit(self, X, y=None):
        """Index a corpus: a FeatureStore as-is, or images plus labels."""
        if isinstance(X, FeatureStore):
            self.store_ = X
            return self
        featurizer = self._featurizer().fit()
        labels = list(y) if y is not None else [None] * len(X)
        if len(labels) != len(X):
            raise ValueError(f"got {len(X)} images but {len(labels)} labels")
        width = len(str(max(len(X) - 1, 0)))
        entries = []
        for i, (item, label) in enumerate(zip(X, labels)):
            fv = extract_features(
                coerce_image(item),
                featurizer.config_,
                id=f"img_{i:0{width}d}",
                label=None if label is None else str(label),
            )
            entries.append(fv)
        self.store_ = FeatureStore(config=featurizer.config_, entries=tuple(entries))
        return self

    def _check_fitted(self):
        if not hasattr(self, "store_"):
            raise NotFittedError("this ImageRetriever instance is not fitted yet")

    def query(self, image, k=10):
        """Ranked QueryResult list for one image."""
        self._check_fitted()
        fv = extract_features(coerce_image(image), self.store_.config)
        return rank(fv, self.store_, self._spec(k))

    def kneighbors(self, X, n_neighbors=5, return_distance=True):
        """Indices (and distances) of the closest stored entries per query."""
        self._check_fitted()
        positions = {entry_id: i for i, entry_id in enumerate(self.store_.ids())}
        indices = []
        distances = []
        for item in X:
            results = self.query(item, k=n_neighbors)
            indices.append([positions[r.id] for r in results])
            distances.append([r.total_distance for r in results])
        indices = np.array(indices, dtype=np.intp)
        if return_distance:
            return np.array(distances), indices
        return indices

    def predict(self, X):
        """Label of the nearest stored image for each query."""
        self._check_fitted()
        return np.array(
            [self.query(item, k=1)[0].label for item in X], dtype=object
        )
