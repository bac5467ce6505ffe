"""Persistence and vulnerability annotation for extracted corpora.

A CorpusDb is one JSON file holding feature vectors plus vulnerability
records; no external database is involved so runs stay reproducible.
Version ordering follows dotted numeric segments (missing segments count
as zero) with any non-numeric suffix breaking ties lexicographically,
which covers the versioning schemes of the big CMS families.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .corpus import ServiceId
from .errors import SchemaError
from .features import FeatureVector

__all__ = [
    "CorpusDb",
    "VulnRecord",
    "annotate_vulns",
    "load_db",
    "load_vuln_records",
    "parse_version",
    "save_db",
    "version_in_range",
    "version_key",
    "vulns_for_cluster",
    "cluster_vuln_summary",
]

SCHEMA_VERSION = 1

VULN_CLASSES = ("rce", "xss", "sqli", "other")

_VERSION_RE = re.compile(r"^(\d+(?:\.\d+){0,3})(.*)$")


def parse_version(version: str) -> tuple[tuple[int, ...], str]:
    m = _VERSION_RE.match(version)
    if not m:
        raise ValueError(f"unparseable version: {version!r}")
    nums = tuple(int(p) for p in m.group(1).split("."))
    return nums, m.group(2)


def version_key(version: str) -> tuple[tuple[int, ...], str]:
    """Total-order key: numeric segments zero-padded to four, then suffix."""
    nums, suffix = parse_version(version)
    return nums + (0,) * (4 - len(nums)), suffix


def version_in_range(version: str, introduced: str, fixed: str) -> bool:
    """Half-open containment: introduced <= version < fixed."""
    if not version:
        return False
    v = version_key(version)
    return version_key(introduced) <= v < version_key(fixed)


@dataclass(frozen=True)
class VulnRecord:
    """A known vulnerability over a version range [introduced, fixed)."""

    vendor: str
    product: str
    component: str
    introduced: str
    fixed: str
    vuln_class: str
    reference: str = ""

    def __post_init__(self) -> None:
        if self.vuln_class not in VULN_CLASSES:
            raise ValueError(f"unknown vulnerability class: {self.vuln_class!r}")
        if version_key(self.introduced) >= version_key(self.fixed):
            raise ValueError(
                f"empty version range [{self.introduced}, {self.fixed})"
            )

    def matches(self, service: ServiceId) -> bool:
        return (
            service.vendor == self.vendor
            and service.product == self.product
            and service.component == self.component
            and version_in_range(service.version, self.introduced, self.fixed)
        )

    def to_json(self) -> dict:
        return {
            "vendor": self.vendor,
            "product": self.product,
            "component": self.component,
            "introduced": self.introduced,
            "fixed": self.fixed,
            "class": self.vuln_class,
            "reference": self.reference,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "VulnRecord":
        return cls(
            obj["vendor"], obj["product"], obj.get("component", ""),
            obj["introduced"], obj["fixed"], obj["class"],
            obj.get("reference", ""),
        )


@dataclass
class CorpusDb:
    vectors: list[FeatureVector] = field(default_factory=list)
    vulns: list[VulnRecord] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        tokens = [v.service.token() for v in self.vectors]
        if len(tokens) != len(set(tokens)):
            raise ValueError("duplicate service ids in corpus db")
        self.metadata.setdefault("created", "")
        self.metadata.setdefault("toolchain", f"corsica {__version__}")

    def services(self) -> list[ServiceId]:
        return [v.service for v in self.vectors]

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "metadata": self.metadata,
            "vectors": [v.to_json() for v in self.vectors],
            "vulns": [r.to_json() for r in self.vulns],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CorpusDb":
        if obj.get("schema_version") != SCHEMA_VERSION:
            raise SchemaError(
                f"unsupported corpus db schema_version: {obj.get('schema_version')!r}"
            )
        return cls(
            vectors=[FeatureVector.from_json(v) for v in obj["vectors"]],
            vulns=[VulnRecord.from_json(r) for r in obj.get("vulns", [])],
            metadata=dict(obj.get("metadata", {})),
        )


def save_db(db: CorpusDb, path: str | Path) -> None:
    """Atomic, byte-stable write: same db value, same bytes."""
    path = Path(path)
    data = json.dumps(db.to_json(), indent=2, sort_keys=True) + "\n"
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(data, encoding="utf-8")
    tmp.replace(path)


def load_db(path: str | Path) -> CorpusDb:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read corpus db {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError(f"corpus db {path} is not a JSON object")
    return CorpusDb.from_json(obj)


def load_vuln_records(path: str | Path) -> list[VulnRecord]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read vulnerability records {path}: {exc}") from exc
    if not isinstance(raw, list):
        raise SchemaError("vulnerability records file must be a JSON list")
    return [VulnRecord.from_json(r) for r in raw]


def annotate_vulns(db: CorpusDb, records: list[VulnRecord]) -> tuple[CorpusDb, list[VulnRecord]]:
    """Merge records into the db; returns (db, dangling records).

    A record is dangling when no vector matches its vendor/product/
    component; it is still stored, since the corpus may grow later.
    """
    known = {(v.service.vendor, v.service.product, v.service.component)
             for v in db.vectors}
    dangling = [r for r in records
                if (r.vendor, r.product, r.component) not in known]
    merged = list(db.vulns)
    have = {tuple(sorted(r.to_json().items())) for r in merged}
    for r in records:
        key = tuple(sorted(r.to_json().items()))
        if key not in have:
            merged.append(r)
            have.add(key)
    return (
        CorpusDb(vectors=db.vectors, vulns=merged, metadata=dict(db.metadata)),
        dangling,
    )


def vulns_for_cluster(
    db: CorpusDb, cluster: list[ServiceId] | set[ServiceId]
) -> list[tuple[ServiceId, VulnRecord]]:
    """All (service, record) pairs where the service version is in range."""
    pairs = []
    for service in sorted(cluster, key=lambda s: s.token()):
        for record in db.vulns:
            if record.matches(service):
                pairs.append((service, record))
    return pairs


def cluster_vuln_summary(db: CorpusDb, cluster) -> dict:
    """Pairs plus the actionability verdict for an identification cluster.

    A cluster is actionably vulnerable only when every member matches some
    record: whatever the target really is, it is exploitable. Partial
    matches are reported but carry no such guarantee.
    """
    cluster = list(cluster)
    pairs = vulns_for_cluster(db, cluster)
    matched = {service.token() for service, _ in pairs}
    unmatched = sorted(s.token() for s in cluster if s.token() not in matched)
    return {
        "pairs": pairs,
        "matched": sorted(matched),
        "unmatched": unmatched,
        "actionable": bool(cluster) and not unmatched,
    }
