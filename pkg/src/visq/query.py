"""Ranking of stored images against a query feature vector.

Distances are computed per feature family (global histogram, block
histograms, texture moments) and combined as a weighted sum of min-max
normalized values over the candidate set.  Min-max normalization makes
families with wildly different units (histogram mass vs intensity cubed)
commensurable, and any positive rescaling of one family's raw distances
leaves the final ordering unchanged.

Block histograms are compared positionally (block i against block i) and
averaged, which preserves the spatial layout information they exist to
capture.  Texture vectors are pre-scaled per component by the largest
absolute value seen in the store so no single moment dominates on units
alone.

Ties are broken by id ascending so rankings are reproducible across runs
and platforms; when the query carries the id of a stored entry, that
entry wins the tie so an image queried against its own store always comes
back first at distance zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .color import ColorHistogram
from .errors import EmptyStoreError, MissingFeatureError, SchemeMismatchError
from .metrics import (
    MetricSpec,
    SimilarityMatrix,
    binarize_histogram,
    bray_curtis,
    build_similarity_matrix,
    chebyshev,
    hamming,
    minkowski,
    quadratic_distance,
)
from .store import FeatureStore, FeatureVector
from .validation import check_positive_int

__all__ = [
    "FAMILIES",
    "QuerySpec",
    "QueryResult",
    "feature_distance",
    "combine_distances",
    "parse_weights",
    "texture_scale",
    "rank",
]

FAMILIES = ("gch", "lch", "texture")

# Metric kinds that need non-negative or binary inputs make no sense over
# signed moment vectors and are rejected for the texture family upfront.
_HISTOGRAM_ONLY_KINDS = ("bray_curtis", "hamming")


@dataclass(frozen=True)
class QuerySpec:
    """How to rank: metric, result count, and per-family weights."""

    metric: MetricSpec
    k: int = 10
    weights: dict = field(default_factory=lambda: {"gch": 1.0})

    def __post_init__(self):
        check_positive_int(self.k, "k")
        weights = dict(self.weights)
        for family, weight in weights.items():
            if family not in FAMILIES:
                raise ValueError(f"unknown feature family {family!r}")
            if weight < 0.0:
                raise ValueError(f"weight for {family} must be >= 0, got {weight}")
        if not any(w > 0.0 for w in weights.values()):
            raise ValueError("at least one family weight must be positive")
        if (
            self.metric.kind in _HISTOGRAM_ONLY_KINDS
            and weights.get("texture", 0.0) > 0.0
        ):
            raise ValueError(
                f"metric {self.metric.kind!r} is not defined over texture moments; "
                "set the texture weight to 0"
            )
        object.__setattr__(self, "weights", weights)

    def active_families(self) -> tuple:
        return tuple(f for f in FAMILIES if self.weights.get(f, 0.0) > 0.0)


@dataclass(frozen=True)
class QueryResult:
    """One ranked candidate with its combined and per-family distances."""

    id: str
    label: str | None
    total_distance: float
    per_feature: dict


def parse_weights(text: str) -> dict:
    """Parse a weight map like ``gch=1,lch=0.5,texture=0``.

    Families left out get weight 0; validation of the resulting map is
    QuerySpec's job.
    """
    weights = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"bad weight entry {part!r}; expected family=value")
        name = name.strip()
        if name not in FAMILIES:
            raise ValueError(f"unknown feature family {name!r}")
        try:
            weights[name] = float(value)
        except ValueError:
            raise ValueError(f"bad weight value for {name}: {value!r}") from None
    if not weights:
        raise ValueError("empty weight map")
    return weights


def _histogram_distance(
    hq: ColorHistogram,
    ht: ColorHistogram,
    metric: MetricSpec,
    matrix: SimilarityMatrix | None,
) -> float:
    if hq.scheme != ht.scheme:
        raise SchemeMismatchError("histograms use different quantization schemes")
    kind = metric.kind
    if kind in ("minkowski", "l1", "euclidean", "manhattan"):
        return minkowski(hq.values, ht.values, metric.order)
    if kind == "chebyshev":
        return chebyshev(hq.values, ht.values)
    if kind == "bray_curtis":
        return bray_curtis(hq.values, ht.values)
    if kind == "intersection":
        # distance form of the intersection similarity: M - S, which is
        # zero for identical histograms and grows as overlap shrinks
        m = hq.scheme.total_bins
        return m - (m - minkowski(hq.values, ht.values, 1.0))
    if kind == "quadratic":
        if matrix is None:
            matrix = build_similarity_matrix(hq.scheme)
        return quadratic_distance(hq, ht, matrix)
    if kind == "hamming":
        return hamming(binarize_histogram(hq), binarize_histogram(ht))
    raise ValueError(f"unknown metric kind {kind!r}")


def _vector_distance(a: np.ndarray, b: np.ndarray, metric: MetricSpec) -> float:
    kind = metric.kind
    if kind in ("minkowski", "l1", "euclidean", "manhattan"):
        return minkowski(a, b, metric.order)
    if kind == "chebyshev":
        return chebyshev(a, b)
    if kind == "intersection":
        # the intersection-derived distance telescopes to plain L1
        return minkowski(a, b, 1.0)
    if kind == "quadratic":
        # no cross-component similarity exists for moments; identity matrix
        diff = a - b
        return float(diff @ diff)
    raise ValueError(f"metric {kind!r} is not defined over texture moments")


def texture_scale(store: FeatureStore) -> np.ndarray:
    """Per-component max absolute moment value over the store's entries.

    Components that are zero everywhere scale by 1 so division is safe.
    """
    vectors = [e.texture.as_vector() for e in store.entries if e.texture is not None]
    if not vectors:
        raise MissingFeatureError("store has no texture moments")
    scale = np.max(np.abs(np.stack(vectors)), axis=0)
    scale[scale == 0.0] = 1.0
    return scale


def feature_distance(
    q: FeatureVector,
    t: FeatureVector,
    family: str,
    metric: MetricSpec,
    matrix: SimilarityMatrix | None = None,
    scale: np.ndarray | None = None,
) -> float:
    """Distance between two feature vectors within one family.

    ``matrix`` supplies the similarity table for the quadratic form and
    ``scale`` the per-component texture normalizer (defaults to no
    scaling).
    """
    if family == "gch":
        return _histogram_distance(q.gch, t.gch, metric, matrix)
    if family == "lch":
        if q.lch is None or t.lch is None:
            raise MissingFeatureError("both feature vectors need block histograms")
        if (q.lch.grid_rows, q.lch.grid_cols) != (t.lch.grid_rows, t.lch.grid_cols):
            raise SchemeMismatchError("block grids differ between feature vectors")
        block_distances = [
            _histogram_distance(bq, bt, metric, matrix)
            for bq, bt in zip(q.lch.blocks, t.lch.blocks)
        ]
        return float(np.mean(block_distances))
    if family == "texture":
        if q.texture is None or t.texture is None:
            raise MissingFeatureError("both feature vectors need texture moments")
        a = q.texture.as_vector()
        b = t.texture.as_vector()
        if scale is not None:
            a = a / scale
            b = b / scale
        return _vector_distance(a, b, metric)
    raise ValueError(f"unknown feature family {family!r}")


def combine_distances(per_family: dict, weights: dict, normalizers: dict) -> float:
    """Weighted sum of min-max normalized per-family distances.

    ``normalizers`` maps each family to the (min, max) of its raw
    distances over the candidate set being ranked.  A family where every
    candidate is equidistant (max equals min) contributes zero.  Weights
    are normalized to sum to 1 before combining.
    """
    active = [f for f, w in weights.items() if w > 0.0]
    total_weight = sum(weights[f] for f in active)
    combined = 0.0
    for family in active:
        lo, hi = normalizers[family]
        if hi > lo:
            combined += (weights[family] / total_weight) * (
                (per_family[family] - lo) / (hi - lo)
            )
    return combined


def rank(q: FeatureVector, store: FeatureStore, spec: QuerySpec) -> list:
    """Top-k store entries by combined distance to the query.

    Deterministic for fixed inputs: candidates are ordered by total
    distance, then the query's own stored entry (matching id), then id.
    ``k`` is capped at the store size.
    """
    if len(store) == 0:
        raise EmptyStoreError("cannot rank against an empty store")
    if q.gch.scheme != store.config.scheme:
        raise SchemeMismatchError(
            "query was extracted with a different quantization scheme than the store"
        )
    families = spec.active_families()
    enabled = store.config.enabled_families()
    for family in families:
        if family not in enabled:
            raise MissingFeatureError(
                f"family {family!r} is weighted but the store does not carry it"
            )
        if not q.has_family(family):
            raise MissingFeatureError(f"query lacks the {family!r} family")

    matrix = None
    if spec.metric.kind == "quadratic":
        matrix = build_similarity_matrix(store.config.scheme)
    scale = texture_scale(store) if "texture" in families else None

    raw = {
        family: np.array(
            [
                feature_distance(q, entry, family, spec.metric, matrix, scale)
                for entry in store.entries
            ]
        )
        for family in families
    }
    normalizers = {f: (float(raw[f].min()), float(raw[f].max())) for f in families}

    per_feature = [
        {f: float(raw[f][i]) for f in families} for i in range(len(store))
    ]
    totals = [
        combine_distances(per_feature[i], spec.weights, normalizers)
        for i in range(len(store))
    ]

    def sort_key(i: int):
        entry = store.entries[i]
        return (totals[i], 0 if entry.id == q.id else 1, entry.id)

    order = sorted(range(len(store)), key=sort_key)
    return [
        QueryResult(
            id=store.entries[i].id,
            label=store.entries[i].label,
            total_distance=totals[i],
            per_feature=per_feature[i],
        )
        for i in order[: min(spec.k, len(store))]
    ]
