"""Per-service file corpora: identities, file sets, ingestion and stats.

A corpus is a collection of ServiceFileSets, one per identifiable unit
(service version, device firmware, plugin version). File sets come from
three sources: unpacked installer trees, unpacked firmware root
filesystems, and live crawls. All three produce the same structure so
downstream stages never care where the bytes came from.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IngestError, SchemaError, WebrootNotFoundError

__all__ = [
    "EXTENSION_TYPES",
    "FileEntry",
    "ServiceId",
    "ServiceFileSet",
    "corpus_stats",
    "filetype_for_path",
    "ingest_install_tree",
    "ingest_firmware_root",
    "load_file_set",
    "load_corpus_dir",
    "save_file_set",
    "path_extension",
]

# Extension -> filetype tag. Everything not listed is "other"; only
# image/css/js files are probeable across origins.
EXTENSION_TYPES = {
    ".png": "image",
    ".gif": "image",
    ".jpg": "image",
    ".jpeg": "image",
    ".svg": "image",
    ".ico": "image",
    ".bmp": "image",
    ".webp": "image",
    ".css": "css",
    ".js": "js",
    ".mjs": "js",
}

# Common embedded-Linux web roots, searched in order under an unpacked
# firmware tree. An explicit hint always wins.
WEBROOT_CANDIDATES = (
    "www",
    "web",
    "htdocs",
    "html",
    "webroot",
    "usr/local/www",
    "var/www",
)

_VERSION_RE = re.compile(r"^(\d+(?:\.\d+){0,3})(.*)$")


def path_extension(path: str) -> str:
    """Lowercased extension of a web path, ignoring query and fragment."""
    bare = path.split("?", 1)[0].split("#", 1)[0]
    name = bare.rsplit("/", 1)[-1]
    dot = name.rfind(".")
    if dot <= 0:
        return ""
    return name[dot:].lower()


def filetype_for_path(path: str) -> str:
    return EXTENSION_TYPES.get(path_extension(path), "other")


@dataclass(frozen=True, order=True)
class ServiceId:
    """Identity of one fingerprintable unit.

    version may be empty for unversioned devices; component names a part
    of a larger service (e.g. a plugin) and is empty for whole services.
    """

    vendor: str
    product: str
    version: str = ""
    component: str = ""

    def __post_init__(self) -> None:
        if not self.vendor or not self.product:
            raise ValueError("vendor and product are required")
        for part in (self.vendor, self.product, self.version, self.component):
            if ":" in part:
                raise ValueError("service id fields may not contain ':'")
        if self.version and not _VERSION_RE.match(self.version):
            raise ValueError(f"unparseable version: {self.version!r}")

    def token(self) -> str:
        parts = [self.vendor, self.product, self.version]
        if self.component:
            parts.append(self.component)
        return ":".join(parts)

    @classmethod
    def from_token(cls, token: str) -> "ServiceId":
        parts = token.split(":")
        if len(parts) == 2:
            parts.append("")
        if len(parts) not in (3, 4):
            raise ValueError(f"bad service token: {token!r}")
        return cls(*parts)

    def to_json(self) -> dict:
        return {
            "vendor": self.vendor,
            "product": self.product,
            "version": self.version,
            "component": self.component,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ServiceId":
        return cls(
            obj["vendor"], obj["product"],
            obj.get("version", ""), obj.get("component", ""),
        )


@dataclass(frozen=True)
class FileEntry:
    filetype: str
    content: bytes


def _check_web_path(path: str) -> None:
    if path.startswith("/"):
        raise ValueError(f"web path has leading '/': {path!r}")
    if ".." in path.split("/"):
        raise ValueError(f"web path contains '..' segment: {path!r}")


@dataclass
class ServiceFileSet:
    """All probeable files of one service, keyed by webroot-relative path."""

    service: ServiceId
    provenance: str  # install | firmware | crawl
    files: dict[str, FileEntry] = field(default_factory=dict)

    def add(self, path: str, content: bytes, filetype: str | None = None) -> None:
        _check_web_path(path)
        self.files[path] = FileEntry(filetype or filetype_for_path(path), content)

    def paths(self) -> list[str]:
        return sorted(self.files)

    def get(self, path: str) -> FileEntry | None:
        return self.files.get(path)

    def __len__(self) -> int:
        return len(self.files)


def _walk_regular_files(root: Path) -> list[Path]:
    found = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in sorted(filenames):
            p = Path(dirpath) / name
            if p.is_file() and not p.is_symlink():
                found.append(p)
    return found


def ingest_install_tree(root: str | Path, service: ServiceId) -> ServiceFileSet:
    """Ingest an unpacked installer tree; web paths mirror the tree layout."""
    root = Path(root)
    if not root.is_dir():
        raise IngestError(f"not a readable directory: {root}")
    out = ServiceFileSet(service=service, provenance="install")
    try:
        for p in _walk_regular_files(root):
            rel = p.relative_to(root).as_posix()
            out.add(rel, p.read_bytes())
    except OSError as exc:
        raise IngestError(f"cannot read {root}: {exc}") from exc
    return out


def ingest_firmware_root(
    rootfs: str | Path,
    service: ServiceId,
    webroot_hint: str | Path | None = None,
) -> ServiceFileSet:
    """Ingest an already-unpacked firmware filesystem.

    The webroot is located by the hint when given, otherwise by the first
    existing entry of WEBROOT_CANDIDATES. Paths are stored relative to the
    webroot, preserving directory structure.
    """
    rootfs = Path(rootfs)
    if not rootfs.is_dir():
        raise IngestError(f"not a readable directory: {rootfs}")
    if webroot_hint is not None:
        webroot = rootfs / str(webroot_hint).lstrip("/")
        if not webroot.is_dir():
            raise WebrootNotFoundError(f"webroot not found: hinted {webroot_hint!r}")
    else:
        webroot = None
        for cand in WEBROOT_CANDIDATES:
            p = rootfs / cand
            if p.is_dir():
                webroot = p
                break
        if webroot is None:
            raise WebrootNotFoundError(
                f"webroot not found under {rootfs} (candidates: {', '.join(WEBROOT_CANDIDATES)})"
            )
    out = ServiceFileSet(service=service, provenance="firmware")
    try:
        for p in _walk_regular_files(webroot):
            out.add(p.relative_to(webroot).as_posix(), p.read_bytes())
    except OSError as exc:
        raise IngestError(f"cannot read {webroot}: {exc}") from exc
    return out


def corpus_stats(corpus) -> Counter:
    """Histogram of file extensions across a collection of ServiceFileSets."""
    hist: Counter = Counter()
    for fileset in corpus:
        for path in fileset.files:
            hist[path_extension(path)] += 1
    return hist


# ---------------------------------------------------------------------------
# On-disk form: <dir>/manifest.json plus content-addressed blobs/<sha256>.
# Serialization is deterministic so repeated ingestion is byte-identical.
# ---------------------------------------------------------------------------

MANIFEST_VERSION = 1


def save_file_set(fileset: ServiceFileSet, out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    blobs = out_dir / "blobs"
    blobs.mkdir(parents=True, exist_ok=True)
    entries = []
    for path in fileset.paths():
        entry = fileset.files[path]
        digest = hashlib.sha256(entry.content).hexdigest()
        blob = blobs / digest
        if not blob.exists():
            blob.write_bytes(entry.content)
        entries.append({
            "path": path,
            "type": entry.filetype,
            "sha256": digest,
            "size": len(entry.content),
        })
    manifest = {
        "manifest_version": MANIFEST_VERSION,
        "service": fileset.service.to_json(),
        "provenance": fileset.provenance,
        "files": entries,
    }
    data = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    target = out_dir / "manifest.json"
    tmp = out_dir / "manifest.json.tmp"
    tmp.write_text(data, encoding="utf-8")
    tmp.replace(target)
    return target


def load_file_set(src_dir: str | Path) -> ServiceFileSet:
    src_dir = Path(src_dir)
    manifest_path = src_dir / "manifest.json"
    if not manifest_path.is_file():
        raise SchemaError(f"no manifest.json under {src_dir}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("manifest_version") != MANIFEST_VERSION:
        raise SchemaError(
            f"unsupported manifest_version {manifest.get('manifest_version')!r} in {manifest_path}"
        )
    fileset = ServiceFileSet(
        service=ServiceId.from_json(manifest["service"]),
        provenance=manifest["provenance"],
    )
    for entry in manifest["files"]:
        blob = src_dir / "blobs" / entry["sha256"]
        content = blob.read_bytes()
        if len(content) != entry["size"]:
            raise SchemaError(f"blob size mismatch for {entry['path']}")
        fileset.add(entry["path"], content, entry["type"])
    return fileset


def load_corpus_dir(corpus_dir: str | Path) -> list[ServiceFileSet]:
    """Load every ServiceFileSet under a directory.

    Accepts either a single file-set directory (manifest.json at top) or a
    directory of such directories; results are ordered by service token.
    """
    corpus_dir = Path(corpus_dir)
    if (corpus_dir / "manifest.json").is_file():
        return [load_file_set(corpus_dir)]
    sets = []
    for child in sorted(corpus_dir.iterdir()):
        if child.is_dir() and (child / "manifest.json").is_file():
            sets.append(load_file_set(child))
    if not sets:
        raise SchemaError(f"no manifest.json found under {corpus_dir}")
    return sorted(sets, key=lambda s: s.service.token())
