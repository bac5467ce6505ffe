"""Feature-vector extraction from service file sets.

The three extractors are pure functions of file bytes; results are
memoized because real corpora share most files across adjacent versions.
Each extractor keeps at most MAX_SUBFEATURES subfeatures per file so the
probe budget per decision-tree node stays bounded.
"""

from __future__ import annotations

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Callable

from .corpus import ServiceFileSet
from .cssrules import extract_directives
from .errors import SchemaError
from .features import (
    UNVERIFIABLE,
    VERIFIED,
    CssDirective,
    Feature,
    FeatureVector,
    ImageDimension,
    JsSymbol,
    Subfeature,
)
from .imagemeta import parse_image_dimensions
from .jsglobals import extract_symbols

__all__ = [
    "MAX_SUBFEATURES",
    "build_feature_vector",
    "divergence_oracle",
    "extract_css_features",
    "extract_image_feature",
    "extract_js_features",
    "load_divergence_report",
    "normalize_vector",
]

log = logging.getLogger(__name__)

MAX_SUBFEATURES = 5

_SELECTOR_RANK = {"id": 0, "class": 1, "type": 2}

CompatOracle = Callable[[str, str, Subfeature], bool]


@lru_cache(maxsize=8192)
def _image_dimensions_cached(data: bytes):
    return parse_image_dimensions(data)


@lru_cache(maxsize=8192)
def _css_directives_cached(data: bytes):
    return tuple(extract_directives(data))


@lru_cache(maxsize=8192)
def _js_symbols_cached(data: bytes):
    symbols = extract_symbols(data)
    return None if symbols is None else tuple(symbols)


def extract_image_feature(path: str, data: bytes) -> Feature | None:
    dims = _image_dimensions_cached(data)
    if dims is None:
        log.warning("no parseable dimensions in image %s", path)
        return None
    return Feature(path, "image", [ImageDimension(*dims)])


def extract_css_features(
    path: str, data: bytes, max_subfeatures: int = MAX_SUBFEATURES
) -> Feature | None:
    directives = _css_directives_cached(data)
    if not directives:
        return None
    # ids are the most service-specific selectors, so they survive the cap
    # first; document order breaks ties within each group
    ranked = sorted(
        enumerate(directives),
        key=lambda item: (_SELECTOR_RANK[item[1].selector_kind], item[0]),
    )
    kept = [d for _, d in ranked[:max_subfeatures]]
    subs = [
        CssDirective(d.selector_kind, d.selector_name, d.element_type,
                     d.property, d.value)
        for d in kept
    ]
    return Feature(path, "css", subs)


def extract_js_features(
    path: str, data: bytes, max_subfeatures: int = MAX_SUBFEATURES
) -> Feature | None:
    symbols = _js_symbols_cached(data)
    if symbols is None:
        log.warning("skipping unscannable script %s", path)
        return None
    if not symbols:
        return None
    subs = [
        JsSymbol(s.name, s.kind, s.value, s.source_hash)
        for s in symbols[:max_subfeatures]
    ]
    return Feature(path, "js", subs)


def extract_feature(path: str, filetype: str, data: bytes,
                    max_subfeatures: int = MAX_SUBFEATURES) -> Feature | None:
    if filetype == "image":
        return extract_image_feature(path, data)
    if filetype == "css":
        return extract_css_features(path, data, max_subfeatures)
    if filetype == "js":
        return extract_js_features(path, data, max_subfeatures)
    return None


def build_feature_vector(
    fileset: ServiceFileSet, max_subfeatures: int = MAX_SUBFEATURES
) -> FeatureVector:
    """One Feature per usable file, ordered lexicographically by path."""
    features = []
    for path in fileset.paths():
        entry = fileset.files[path]
        feature = extract_feature(path, entry.filetype, entry.content, max_subfeatures)
        if feature is not None:
            features.append(feature)
    return FeatureVector(service=fileset.service, features=features)


def normalize_vector(vector: FeatureVector, oracle: CompatOracle) -> FeatureVector:
    """Re-check every subfeature against its own source file.

    Subfeatures the oracle rejects are flagged unverifiable (the tree
    builder ignores them); features left with no verified subfeature are
    dropped. With the simulator oracle this is a no-op by construction.
    """
    kept = []
    for feature in vector.features:
        flags = [
            VERIFIED if oracle(feature.path, feature.filetype, sub) else UNVERIFIABLE
            for sub in feature.subfeatures
        ]
        if VERIFIED not in flags:
            continue
        kept.append(Feature(feature.path, feature.filetype,
                            list(feature.subfeatures), flags))
    return FeatureVector(service=vector.service, features=kept)


# ---------------------------------------------------------------------------
# Divergence-report oracle: the probe runtime reports subfeatures whose
# observed value differed between engines; normalization drops them.
# ---------------------------------------------------------------------------

DIVERGENCE_SCHEMA_VERSION = 1


def load_divergence_report(path) -> dict:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise SchemaError(f"cannot read divergence report {path}: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("schema_version") != DIVERGENCE_SCHEMA_VERSION:
        raise SchemaError("unsupported divergence report schema")
    return obj


def divergence_oracle(report: dict, service) -> CompatOracle:
    """Reject every (service, path, subfeature) the report lists as divergent."""
    token = service.token()
    divergent = {
        (entry["path"], json.dumps(entry["subfeature"], sort_keys=True))
        for entry in report.get("divergent", [])
        if entry.get("service") == token
    }

    def oracle(path: str, filetype: str, sub: Subfeature) -> bool:
        return (path, json.dumps(sub.to_json(), sort_keys=True)) not in divergent

    return oracle
