"""Distance and similarity measures over feature vectors and histograms.

Nine measures are exposed: the Minkowski family (with Manhattan and
Euclidean as the k=1 and k=2 aliases), the per-bin L1 and L2 histogram
forms, intersection similarity, the quadratic form driven by a cross-bin
color similarity matrix, Chebyshev, Bray-Curtis, and normalized Hamming
over bit signatures.

Notes on the quadratic form: the similarity matrix built from the HSV
cell centers is symmetric with unit diagonal but is not guaranteed to be
positive semidefinite, so the quadratic form can come out negative for
some histogram pairs.  The raw value is reported as computed; ranking
consumers simply order by it.  Matrices are cached per scheme because
rebuilding the 256 x 256 table per query pair would dominate query cost.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .color import ColorHistogram, QuantizationScheme, bin_representative
from .errors import MissingFeatureError, SchemeMismatchError
from .imaging import HsvColor
from .validation import as_float_vector, check_equal_length

__all__ = [
    "METRIC_KINDS",
    "MetricSpec",
    "SimilarityMatrix",
    "BitSignature",
    "minkowski",
    "l1_histogram",
    "euclidean_histogram",
    "intersection_similarity",
    "color_similarity",
    "build_similarity_matrix",
    "quadratic_distance",
    "chebyshev",
    "bray_curtis",
    "manhattan",
    "hamming",
    "binarize_histogram",
    "binarize_features",
]

METRIC_KINDS = (
    "minkowski",
    "l1",
    "euclidean",
    "intersection",
    "quadratic",
    "chebyshev",
    "bray_curtis",
    "manhattan",
    "hamming",
)

_SQRT5 = float(np.sqrt(5.0))


@dataclass(frozen=True)
class MetricSpec:
    """A metric choice: the kind plus the Minkowski order where relevant.

    ``manhattan`` resolves to the Minkowski form with k=1 and
    ``euclidean`` to k=2; ``order`` reports the effective k.
    """

    kind: str
    k: float | None = None

    def __post_init__(self):
        if self.kind not in METRIC_KINDS:
            raise ValueError(
                f"unknown metric kind {self.kind!r}; expected one of {METRIC_KINDS}"
            )
        if self.kind == "minkowski":
            if self.k is None:
                raise ValueError("metric kind 'minkowski' requires an order k")
            if self.k < 1.0:
                raise ValueError(f"Minkowski order must be >= 1, got {self.k}")
        elif self.k is not None:
            raise ValueError(f"metric kind {self.kind!r} does not take an order")

    @property
    def order(self) -> float | None:
        """Effective Minkowski order, resolving the named aliases."""
        if self.kind in ("l1", "manhattan"):
            return 1.0
        if self.kind == "euclidean":
            return 2.0
        return self.k


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Cross-bin color similarity table ``a[i, j]`` for the quadratic form."""

    a: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.a, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"similarity matrix must be square, got {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "a", arr)

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @classmethod
    def from_colors(cls, colors) -> "SimilarityMatrix":
        """Pairwise similarity of a list of HSV colors.

        Entry (q, i) is ``1 - d(q, i) / sqrt(5)`` where d is the Euclidean
        distance between the points ``(v, s cos h, s sin h)`` of the two
        colors.  The diagonal is exactly 1 and entries can dip as low as
        ``1 - 3/sqrt(5)``.
        """
        v = np.array([c.v for c in colors])
        x = np.array([c.s * np.cos(c.h) for c in colors])
        y = np.array([c.s * np.sin(c.h) for c in colors])
        sq = (
            (v[:, None] - v[None, :]) ** 2
            + (x[:, None] - x[None, :]) ** 2
            + (y[:, None] - y[None, :]) ** 2
        )
        return cls(1.0 - np.sqrt(sq) / _SQRT5)


@dataclass(frozen=True, eq=False)
class BitSignature:
    """Fixed-length binary signature for the Hamming distance."""

    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.bits)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("bits must be a non-empty one-dimensional sequence")
        if not np.all((arr == 0) | (arr == 1)):
            raise ValueError("bits must be 0 or 1")
        arr = arr.astype(np.uint8)
        arr.flags.writeable = False
        object.__setattr__(self, "bits", arr)

    @property
    def n(self) -> int:
        return self.bits.size

    def __eq__(self, other):
        if not isinstance(other, BitSignature):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)


def minkowski(a, b, k: float) -> float:
    """Minkowski distance ``(sum_i |a_i - b_i|^k)^(1/k)``.

    Orders below 1 are rejected because the triangle inequality fails
    there and the result would not be a metric.
    """
    a = as_float_vector(a, "a")
    b = as_float_vector(b, "b")
    check_equal_length(a, b)
    if k < 1.0:
        raise ValueError(f"Minkowski order must be >= 1, got {k}")
    diff = np.abs(a - b)
    if k == 1.0:
        return float(diff.sum())
    if k == 2.0:
        return float(np.sqrt((diff * diff).sum()))
    return float((diff**k).sum() ** (1.0 / k))


def manhattan(a, b) -> float:
    """Taxicab distance; delegates to the Minkowski form with k=1."""
    return minkowski(a, b, 1.0)


def chebyshev(a, b) -> float:
    """Chessboard distance: the largest per-coordinate gap."""
    a = as_float_vector(a, "a")
    b = as_float_vector(b, "b")
    check_equal_length(a, b)
    return float(np.abs(a - b).max())


def bray_curtis(a, b) -> float:
    """Bray-Curtis dissimilarity ``sum |a_i - b_i| / sum (a_i + b_i)``.

    Defined for non-negative vectors only, where it lies in [0, 1].
    """
    a = as_float_vector(a, "a")
    b = as_float_vector(b, "b")
    check_equal_length(a, b)
    if np.any(a < 0.0) or np.any(b < 0.0):
        raise ValueError("Bray-Curtis distance requires non-negative vectors")
    denominator = float((a + b).sum())
    if denominator == 0.0:
        raise ZeroDivisionError("Bray-Curtis distance undefined for two all-zero vectors")
    return float(np.abs(a - b).sum()) / denominator


def hamming(x: BitSignature, y: BitSignature) -> float:
    """Fraction of positions where two bit signatures disagree."""
    check_equal_length(x.bits, y.bits, names=("x", "y"))
    return float(np.mean(x.bits != y.bits))


def _check_same_scheme(hq: ColorHistogram, ht: ColorHistogram):
    if hq.scheme != ht.scheme:
        raise SchemeMismatchError(
            f"histograms use different schemes: {hq.scheme} vs {ht.scheme}"
        )


def l1_histogram(hq: ColorHistogram, ht: ColorHistogram) -> float:
    """Per-bin absolute difference summed over all bins; in [0, 2]."""
    _check_same_scheme(hq, ht)
    return minkowski(hq.values, ht.values, 1.0)


def euclidean_histogram(hq: ColorHistogram, ht: ColorHistogram) -> float:
    """Per-bin L2 form; in [0, sqrt(2)] for normalized histograms."""
    _check_same_scheme(hq, ht)
    return minkowski(hq.values, ht.values, 2.0)


def intersection_similarity(hq: ColorHistogram, ht: ColorHistogram) -> float:
    """Per-bin intersection similarity ``sum_m (1 - |h_q[m] - h_t[m]|)``.

    Larger means more similar.  The sum telescopes to ``M - L1`` where M
    is the bin count, and it is computed that way so the identity
    ``similarity + l1_histogram == M`` holds exactly in floating point.
    """
    _check_same_scheme(hq, ht)
    return hq.scheme.total_bins - l1_histogram(hq, ht)


def color_similarity(c1: HsvColor, c2: HsvColor) -> float:
    """Similarity of two HSV colors, the entry formula of the matrix."""
    return float(SimilarityMatrix.from_colors([c1, c2]).a[0, 1])


@functools.lru_cache(maxsize=8)
def _cached_matrix(h_bins: int, s_bins: int, v_bins: int) -> SimilarityMatrix:
    scheme = QuantizationScheme(h_bins, s_bins, v_bins)
    colors = [bin_representative(scheme, i) for i in range(scheme.total_bins)]
    return SimilarityMatrix.from_colors(colors)


def build_similarity_matrix(scheme: QuantizationScheme) -> SimilarityMatrix:
    """Similarity matrix over a scheme's bin centers, cached per scheme.

    The cache is safe under concurrent first use: racing callers may both
    compute the table, but the computation is deterministic so whichever
    result lands in the cache is identical.
    """
    return _cached_matrix(scheme.h_bins, scheme.s_bins, scheme.v_bins)


def quadratic_distance(hq, ht, matrix: SimilarityMatrix) -> float:
    """Quadratic-form distance ``(h_q - h_t)^T A (h_q - h_t)``.

    Accepts histograms or plain vectors.  The raw value is returned even
    when negative; see the module notes.
    """
    q = hq.values if isinstance(hq, ColorHistogram) else as_float_vector(hq, "hq")
    t = ht.values if isinstance(ht, ColorHistogram) else as_float_vector(ht, "ht")
    check_equal_length(q, t, names=("hq", "ht"))
    if matrix.m != len(q):
        raise ValueError(
            f"similarity matrix is {matrix.m}x{matrix.m} but histograms "
            f"have {len(q)} bins"
        )
    diff = q - t
    return float(diff @ matrix.a @ diff)


def binarize_histogram(hist: ColorHistogram) -> BitSignature:
    """One bit per bin: set when the bin exceeds uniform occupancy 1/M."""
    m = hist.scheme.total_bins
    return BitSignature((hist.values > 1.0 / m).astype(np.uint8))


def binarize_features(features) -> BitSignature:
    """Bit signature of a feature vector's global color histogram."""
    gch = getattr(features, "gch", None)
    if gch is None:
        raise MissingFeatureError("feature vector has no global color histogram")
    return binarize_histogram(gch)
