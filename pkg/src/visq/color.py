"""Quantized HSV color histograms: one global histogram per image (GCH)
and a fixed grid of block histograms (LCH).

Quantization is uniform per axis.  The default scheme of 16 hue bins and
4 bins each for saturation and value gives 256 total bins.  Histograms
are stored normalized (frequencies, not counts) because every distance
in the metrics module is written over normalized histograms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridTooFineError
from .imaging import TWO_PI, HsvColor, RawImage, hsv_planes
from .validation import check_positive_int

__all__ = [
    "QuantizationScheme",
    "ColorHistogram",
    "LocalColorHistogram",
    "DEFAULT_SCHEME",
    "quantize_hsv",
    "quantize_planes",
    "bin_representative",
    "global_histogram",
    "local_histograms",
]

SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class QuantizationScheme:
    """Per-axis bin counts for the uniform HSV quantizer."""

    h_bins: int = 16
    s_bins: int = 4
    v_bins: int = 4

    def __post_init__(self):
        check_positive_int(self.h_bins, "h_bins")
        check_positive_int(self.s_bins, "s_bins")
        check_positive_int(self.v_bins, "v_bins")

    @property
    def total_bins(self) -> int:
        return self.h_bins * self.s_bins * self.v_bins


DEFAULT_SCHEME = QuantizationScheme(16, 4, 4)


@dataclass(frozen=True, eq=False)
class ColorHistogram:
    """Normalized bin frequencies under a quantization scheme."""

    scheme: QuantizationScheme
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size != self.scheme.total_bins:
            raise ValueError(
                f"histogram must have {self.scheme.total_bins} values, "
                f"got shape {arr.shape}"
            )
        if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
            raise ValueError("histogram values must be finite and non-negative")
        total = float(arr.sum())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"histogram must sum to 1, got {total}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __eq__(self, other):
        if not isinstance(other, ColorHistogram):
            return NotImplemented
        return self.scheme == other.scheme and np.array_equal(self.values, other.values)


@dataclass(frozen=True, eq=False)
class LocalColorHistogram:
    """Row-major grid of per-block histograms over one image."""

    grid_rows: int
    grid_cols: int
    blocks: tuple

    def __post_init__(self):
        check_positive_int(self.grid_rows, "grid_rows")
        check_positive_int(self.grid_cols, "grid_cols")
        blocks = tuple(self.blocks)
        if len(blocks) != self.grid_rows * self.grid_cols:
            raise ValueError(
                f"expected {self.grid_rows * self.grid_cols} blocks, got {len(blocks)}"
            )
        if any(not isinstance(b, ColorHistogram) for b in blocks):
            raise ValueError("blocks must be ColorHistogram instances")
        schemes = {b.scheme for b in blocks}
        if len(schemes) != 1:
            raise ValueError("all blocks must share one quantization scheme")
        object.__setattr__(self, "blocks", blocks)

    @property
    def scheme(self) -> QuantizationScheme:
        return self.blocks[0].scheme

    def __eq__(self, other):
        if not isinstance(other, LocalColorHistogram):
            return NotImplemented
        return (
            self.grid_rows == other.grid_rows
            and self.grid_cols == other.grid_cols
            and self.blocks == other.blocks
        )


def quantize_planes(h, s, v, scheme: QuantizationScheme):
    """Vectorized bin indices for hue/saturation/value arrays.

    Index layout is ``h_idx * (s_bins * v_bins) + s_idx * v_bins + v_idx``
    with each axis index clamped to its top bin for inputs sitting exactly
    at the upper boundary (s or v equal to 1.0, h equal to 2*pi).
    """
    h_idx = np.minimum(
        np.floor(np.asarray(h) / TWO_PI * scheme.h_bins).astype(np.int64),
        scheme.h_bins - 1,
    )
    s_idx = np.minimum(
        np.floor(np.asarray(s) * scheme.s_bins).astype(np.int64), scheme.s_bins - 1
    )
    v_idx = np.minimum(
        np.floor(np.asarray(v) * scheme.v_bins).astype(np.int64), scheme.v_bins - 1
    )
    return h_idx * (scheme.s_bins * scheme.v_bins) + s_idx * scheme.v_bins + v_idx


def quantize_hsv(color: HsvColor, scheme: QuantizationScheme = DEFAULT_SCHEME) -> int:
    """Bin index of a single HSV color under a scheme."""
    return int(quantize_planes(color.h, color.s, color.v, scheme))


def bin_representative(
    scheme: QuantizationScheme, index: int
) -> HsvColor:
    """Center of a bin's cell in (h, s, v) space."""
    m = scheme.total_bins
    if not 0 <= index < m:
        raise IndexError(f"bin index {index} out of range [0, {m})")
    h_idx, rest = divmod(index, scheme.s_bins * scheme.v_bins)
    s_idx, v_idx = divmod(rest, scheme.v_bins)
    return HsvColor(
        (h_idx + 0.5) * TWO_PI / scheme.h_bins,
        (s_idx + 0.5) / scheme.s_bins,
        (v_idx + 0.5) / scheme.v_bins,
    )


def _histogram_of_planes(h, s, v, scheme):
    indices = quantize_planes(h.ravel(), s.ravel(), v.ravel(), scheme)
    counts = np.bincount(indices, minlength=scheme.total_bins)
    return ColorHistogram(scheme, counts / indices.size)


def global_histogram(
    img: RawImage, scheme: QuantizationScheme = DEFAULT_SCHEME
) -> ColorHistogram:
    """Single normalized histogram over every pixel of the image."""
    if img.width * img.height == 0:
        raise ValueError("cannot build a histogram of an empty image")
    h, s, v = hsv_planes(img)
    return _histogram_of_planes(h, s, v, scheme)


def local_histograms(
    img: RawImage,
    grid_rows: int,
    grid_cols: int,
    scheme: QuantizationScheme = DEFAULT_SCHEME,
) -> LocalColorHistogram:
    """Histogram per block of a fixed grid laid over the image.

    Block ``(r, c)`` covers rows ``[r * (H // rows), ...)``; the last block
    along each axis absorbs the remainder so every pixel is counted exactly
    once.  Each block histogram is normalized over its own pixel count.
    """
    check_positive_int(grid_rows, "grid_rows")
    check_positive_int(grid_cols, "grid_cols")
    if grid_rows > img.height or grid_cols > img.width:
        raise GridTooFineError(
            f"grid {grid_rows}x{grid_cols} too fine for a "
            f"{img.height}x{img.width} image"
        )
    h, s, v = hsv_planes(img)
    row_step = img.height // grid_rows
    col_step = img.width // grid_cols
    blocks = []
    for r in range(grid_rows):
        top = r * row_step
        bottom = (r + 1) * row_step if r < grid_rows - 1 else img.height
        for c in range(grid_cols):
            left = c * col_step
            right = (c + 1) * col_step if c < grid_cols - 1 else img.width
            blocks.append(
                _histogram_of_planes(
                    h[top:bottom, left:right],
                    s[top:bottom, left:right],
                    v[top:bottom, left:right],
                    scheme,
                )
            )
    return LocalColorHistogram(grid_rows, grid_cols, tuple(blocks))
