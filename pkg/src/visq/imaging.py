"""Image decoding, color space conversion, and grayscale reduction.

All operations here are pure functions over immutable pixel buffers, so
they are safe to call concurrently.  Hue is expressed in radians in
``[0, 2*pi)`` throughout the package because the downstream color
similarity formula consumes ``cos(h)`` and ``sin(h)`` directly; achromatic
pixels get ``h = 0, s = 0`` by convention.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CorruptDataError, UnsupportedFormatError
from .validation import check_unit_interval

__all__ = [
    "RawImage",
    "HsvColor",
    "GrayImage",
    "decode_image",
    "rgb_to_hsv",
    "hsv_to_rgb",
    "hsv_planes",
    "to_grayscale",
]

TWO_PI = 2.0 * np.pi

# Rec. 601 luma weights, the conventional RGB -> intensity reduction.
_LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])

_MAGIC_NUMBERS = (
    (b"\xff\xd8\xff", "JPEG"),
    (b"\x89PNG\r\n\x1a\n", "PNG"),
    (b"BM", "BMP"),
)


@dataclass(frozen=True, eq=False)
class RawImage:
    """Decoded 8-bit RGB pixel buffer, shape ``(height, width, 3)``."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"pixels must have shape (h, w, 3), got {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if arr.dtype != np.uint8:
            # lossless narrowing only; float buffers are ambiguous (0-1 vs 0-255)
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValueError(f"pixels must be 8-bit integers, got {arr.dtype}")
            if arr.min() < 0 or arr.max() > 255:
                raise ValueError("integer pixel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        else:
            arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, RawImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True)
class HsvColor:
    """A color as hue (radians in [0, 2*pi)), saturation and value in [0, 1]."""

    h: float
    s: float
    v: float

    def __post_init__(self):
        if not 0.0 <= self.h < TWO_PI:
            raise ValueError(f"hue must lie in [0, 2*pi), got {self.h}")
        check_unit_interval(self.s, "saturation")
        check_unit_interval(self.v, "value")


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit intensity plane, shape ``(height, width)``."""

    levels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.levels, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError(f"levels must have shape (h, w), got {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "levels", arr)

    @property
    def width(self):
        return self.levels.shape[1]

    @property
    def height(self):
        return self.levels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.levels, other.levels)


def decode_image(data: bytes) -> RawImage:
    """Decode JPEG, PNG, or BMP bytes into an RGB pixel buffer.

    Raises UnsupportedFormatError when the magic number is not one of the
    three supported formats (GIF in particular is rejected), and
    CorruptDataError when the file is truncated or inconsistent.
    """
    if not any(data.startswith(magic) for magic, _ in _MAGIC_NUMBERS):
        raise UnsupportedFormatError(
            "unrecognized image format; supported formats are JPEG, PNG, BMP"
        )
    try:
        with Image.open(io.BytesIO(data)) as img:
            img.load()
            rgb = img.convert("RGB")
            pixels = np.asarray(rgb, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise CorruptDataError(f"could not decode image: {exc}") from exc
    except (OSError, SyntaxError, ValueError) as exc:
        raise CorruptDataError(f"corrupt image data: {exc}") from exc
    return RawImage(pixels)


def hsv_planes(img: RawImage):
    """Hue/saturation/value planes of an image as float64 arrays.

    This is the vectorized hexcone conversion; ``rgb_to_hsv`` routes
    through it so scalar and bulk paths cannot disagree.
    """
    rgb = img.pixels.astype(np.float64) / 255.0
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    cmax = rgb.max(axis=-1)
    cmin = rgb.min(axis=-1)
    delta = cmax - cmin

    v = cmax
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(cmax > 0.0, delta / cmax, 0.0)
        sixth = np.select(
            [cmax == r, cmax == g],
            [np.mod((g - b) / delta, 6.0), (b - r) / delta + 2.0],
            default=(r - g) / delta + 4.0,
        )
    h = np.where(delta > 0.0, sixth * (np.pi / 3.0), 0.0)
    # mod can round up to exactly 6 for tiny negative numerators
    h = np.where(h >= TWO_PI, 0.0, h)
    return h, s, v


def rgb_to_hsv(r: int, g: int, b: int) -> HsvColor:
    """Convert one 8-bit RGB triple to HSV (hue in radians)."""
    for name, c in (("r", r), ("g", g), ("b", b)):
        if not 0 <= c <= 255:
            raise ValueError(f"channel {name} must lie in [0, 255], got {c}")
    pixel = RawImage(np.array([[[r, g, b]]], dtype=np.uint8))
    h, s, v = hsv_planes(pixel)
    return HsvColor(float(h[0, 0]), float(s[0, 0]), float(v[0, 0]))


def hsv_to_rgb(color: HsvColor):
    """Inverse hexcone conversion back to an 8-bit RGB triple."""
    h, s, v = color.h, color.s, color.v
    c = v * s
    sector = h / (np.pi / 3.0)
    x = c * (1.0 - abs(sector % 2.0 - 1.0))
    m = v - c
    idx = min(int(sector), 5)
    rgb1 = [(c, x, 0.0), (x, c, 0.0), (0.0, c, x), (0.0, x, c), (x, 0.0, c), (c, 0.0, x)][idx]
    return tuple(int(np.floor((ch + m) * 255.0 + 0.5)) for ch in rgb1)


def to_grayscale(img: RawImage) -> GrayImage:
    """Reduce an RGB image to intensity levels via Rec. 601 luma.

    Each level is ``0.299 R + 0.587 G + 0.114 B`` rounded half-up, which
    keeps the result bit-reproducible across platforms.
    """
    luma = img.pixels.astype(np.float64) @ _LUMA_WEIGHTS
    levels = np.floor(luma + 0.5).astype(np.uint8)
    return GrayImage(levels)
