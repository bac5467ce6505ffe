"""corsica: cross-origin web service identification toolchain.

Pipeline: ingest service file corpora, extract per-version feature
vectors from what the Same-Origin Policy leaks (image dimensions, applied
CSS, global script symbols), compile a request-optimized decision tree,
and emit or simulate browser probe plans against modeled networks.
"""

__version__ = "0.1.0"

from .corpus import ServiceFileSet, ServiceId
from .errors import CorsicaError
from .estimator import FeatureVectorExtractor, ServiceTreeClassifier
from .extract import build_feature_vector, normalize_vector
from .features import CssDirective, Feature, FeatureVector, ImageDimension, JsSymbol
from .store import CorpusDb, VulnRecord
from .tree import DecisionTree, FeatureCheck, build_tree, equivalence_classes, tree_metrics

__all__ = [
    "CorpusDb",
    "CorsicaError",
    "CssDirective",
    "DecisionTree",
    "Feature",
    "FeatureCheck",
    "FeatureVector",
    "FeatureVectorExtractor",
    "ImageDimension",
    "JsSymbol",
    "ServiceFileSet",
    "ServiceId",
    "ServiceTreeClassifier",
    "VulnRecord",
    "build_feature_vector",
    "build_tree",
    "equivalence_classes",
    "normalize_vector",
    "tree_metrics",
    "__version__",
]
