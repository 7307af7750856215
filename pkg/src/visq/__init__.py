"""visq: content-based image retrieval by color histograms and texture moments.

The package indexes an image corpus into a persisted feature store,
ranks stored images against a query image under a family of histogram
and vector distances, and scores retrieval quality with precision,
recall, and a mismatch-based retrieval score.  A click CLI (``visq``)
and an HTTP query API expose the same engine.
"""

from .color import (
    ColorHistogram,
    DEFAULT_SCHEME,
    LocalColorHistogram,
    QuantizationScheme,
    bin_representative,
    global_histogram,
    local_histograms,
    quantize_hsv,
)
from .errors import (
    CorruptDataError,
    EmptyCorpusError,
    EmptyStoreError,
    GridTooFineError,
    MalformedRecordError,
    MissingFeatureError,
    SchemeMismatchError,
    SingleClassError,
    StoreFormatError,
    UnlabeledCorpusError,
    UnsupportedFormatError,
    VersionMismatchError,
    VisqError,
)
from .estimators import ImageFeaturizer, ImageRetriever
from .evaluation import EvalConfig, EvalReport, evaluate_corpus, precision, recall, retrieval_score
from .imaging import GrayImage, HsvColor, RawImage, decode_image, hsv_to_rgb, rgb_to_hsv, to_grayscale
from .metrics import (
    BitSignature,
    MetricSpec,
    SimilarityMatrix,
    binarize_features,
    bray_curtis,
    build_similarity_matrix,
    chebyshev,
    color_similarity,
    euclidean_histogram,
    hamming,
    intersection_similarity,
    l1_histogram,
    manhattan,
    minkowski,
    quadratic_distance,
)
from .query import QueryResult, QuerySpec, combine_distances, feature_distance, rank
from .store import (
    ExtractionConfig,
    FeatureStore,
    FeatureVector,
    extract_features,
    ingest_directory,
    load_store,
    save_store,
)
from .texture import GrayHistogram, TextureMoments, gray_histogram, texture_moments

__version__ = "0.1.0"
