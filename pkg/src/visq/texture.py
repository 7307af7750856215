"""Statistical texture moments of a grayscale intensity histogram.

Six figures are computed from the normalized 256-level histogram: mean
intensity, standard deviation, relative smoothness, third central moment
(skewness direction), uniformity, and entropy in bits.

The smoothness figure normalizes the variance by ``(L - 1)^2 = 255^2``
before applying ``1 - 1/(1 + var)``; without that normalization the
figure saturates near 1 for nearly every 8-bit image and stops being
discriminative.  The raw standard deviation is still reported in
intensity units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .imaging import GrayImage

__all__ = [
    "GrayHistogram",
    "TextureMoments",
    "gray_histogram",
    "texture_moments",
    "LEVELS",
]

LEVELS = 256
SUM_TOLERANCE = 1e-9

# FP slack on closed-interval bounds; the exact invariants are
# sigma >= 0, R in [0, 1), U in [1/256, 1], e in [0, 8].
_EDGE = 1e-9


@dataclass(frozen=True, eq=False)
class GrayHistogram:
    """Normalized frequencies of the 256 intensity levels."""

    p: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=np.float64)
        if arr.shape != (LEVELS,):
            raise ValueError(f"expected {LEVELS} probabilities, got shape {arr.shape}")
        if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
            raise ValueError("probabilities must be finite and non-negative")
        total = float(arr.sum())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"probabilities must sum to 1, got {total}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "p", arr)

    def __eq__(self, other):
        if not isinstance(other, GrayHistogram):
            return NotImplemented
        return np.array_equal(self.p, other.p)


@dataclass(frozen=True)
class TextureMoments:
    """The six histogram statistics, in intensity units where applicable."""

    mean: float
    sigma: float
    smoothness: float
    third_moment: float
    uniformity: float
    entropy: float

    def __post_init__(self):
        values = (
            self.mean,
            self.sigma,
            self.smoothness,
            self.third_moment,
            self.uniformity,
            self.entropy,
        )
        if not all(np.isfinite(v) for v in values):
            raise ValueError("texture moments must be finite")
        if self.sigma < 0.0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if not 0.0 <= self.smoothness < 1.0:
            raise ValueError(f"smoothness must lie in [0, 1), got {self.smoothness}")
        if not 1.0 / LEVELS - _EDGE <= self.uniformity <= 1.0 + _EDGE:
            raise ValueError(f"uniformity must lie in [1/256, 1], got {self.uniformity}")
        if not -_EDGE <= self.entropy <= 8.0 + _EDGE:
            raise ValueError(f"entropy must lie in [0, 8] bits, got {self.entropy}")

    def as_vector(self) -> np.ndarray:
        """The six moments as a float vector, in declaration order."""
        return np.array(
            [
                self.mean,
                self.sigma,
                self.smoothness,
                self.third_moment,
                self.uniformity,
                self.entropy,
            ]
        )


def gray_histogram(img: GrayImage) -> GrayHistogram:
    """Normalized level frequencies of a grayscale image."""
    n = img.width * img.height
    if n == 0:
        raise ValueError("cannot build a histogram of an empty image")
    counts = np.bincount(img.levels.ravel(), minlength=LEVELS)
    return GrayHistogram(counts / n)


def texture_moments(hist: GrayHistogram) -> TextureMoments:
    """Compute all six moments from one intensity histogram.

    Entropy uses log base 2 with ``0 * log2(0)`` taken as 0.
    """
    p = hist.p
    z = np.arange(LEVELS, dtype=np.float64)
    mean = float(z @ p)
    centered = z - mean
    variance = float((centered**2) @ p)
    sigma = float(np.sqrt(variance))
    norm_variance = variance / float((LEVELS - 1) ** 2)
    smoothness = 1.0 - 1.0 / (1.0 + norm_variance)
    third_moment = float((centered**3) @ p) + 0.0
    uniformity = float(p @ p)
    nonzero = p[p > 0.0]
    # the + 0.0 folds a negative zero from the negation back to 0.0
    entropy = float(-(nonzero @ np.log2(nonzero))) + 0.0
    return TextureMoments(mean, sigma, smoothness, third_moment, uniformity, entropy)
