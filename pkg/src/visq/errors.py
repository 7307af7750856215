"""Exception types shared across the package.

Plain argument mistakes (mismatched vector lengths, an out-of-range bin
index, a Minkowski order below 1) raise the builtin ``ValueError`` /
``IndexError`` directly.  The classes here cover conditions a caller is
expected to handle programmatically: unreadable inputs, store format
problems, and query/store disagreements.
"""


class VisqError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedFormatError(VisqError):
    """Raised when image bytes are not JPEG, PNG, or BMP."""


class CorruptDataError(VisqError):
    """Raised when an image file is truncated or internally inconsistent."""


class SchemeMismatchError(VisqError, ValueError):
    """Raised when two histograms use different quantization schemes."""


class GridTooFineError(VisqError, ValueError):
    """Raised when a block grid has more blocks than pixels along an axis."""


class MissingFeatureError(VisqError, ValueError):
    """Raised when an operation needs a feature family that is absent."""


class EmptyCorpusError(VisqError):
    """Raised when a directory yields no decodable images."""


class StoreFormatError(VisqError):
    """Base class for persisted-store parsing failures."""


class VersionMismatchError(StoreFormatError):
    """Raised when a store file declares an unknown format version."""


class MalformedRecordError(StoreFormatError):
    """Raised when a store line fails to parse or violates an invariant."""


class EmptyStoreError(VisqError, ValueError):
    """Raised when ranking is attempted against a store with no entries."""


class UnlabeledCorpusError(VisqError, ValueError):
    """Raised when evaluation needs class labels the store does not have."""


class SingleClassError(VisqError, ValueError):
    """Raised when evaluation is attempted on a corpus with fewer than 2 classes."""
