"""Feature model: observables a cross-origin probe can verify.

One Feature describes one probeable file; its subfeatures are the
attributes the Same-Origin Policy leaks for that file type: image
dimensions, applied CSS directives, and global script symbols.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .corpus import ServiceId

__all__ = [
    "CssDirective",
    "Feature",
    "FeatureVector",
    "ImageDimension",
    "JsSymbol",
    "Subfeature",
    "subfeature_from_json",
    "VERIFIED",
    "UNVERIFIABLE",
]

VERIFIED = "verified"
UNVERIFIABLE = "unverifiable"

_IDENT_RE = re.compile(r"^[A-Za-z_$][A-Za-z0-9_$]*$")


@dataclass(frozen=True, order=True)
class ImageDimension:
    """Natural width/height of an image, readable across origins."""

    width: int
    height: int

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image dimensions must be positive")

    def to_json(self) -> dict:
        return {"kind": "image_dimension", "width": self.width, "height": self.height}


@dataclass(frozen=True, order=True)
class CssDirective:
    """One applied style declaration observable via getComputedStyle.

    selector_kind: "type" | "class" | "id"; element_type is the tag the
    probe instantiates; expected_value is the canonical computed value.
    """

    selector_kind: str
    selector_name: str
    element_type: str
    property: str
    expected_value: str

    def __post_init__(self) -> None:
        if self.selector_kind not in ("type", "class", "id"):
            raise ValueError(f"bad selector_kind: {self.selector_kind!r}")

    def to_json(self) -> dict:
        return {
            "kind": "css_directive",
            "selector_kind": self.selector_kind,
            "selector_name": self.selector_name,
            "element_type": self.element_type,
            "property": self.property,
            "expected_value": self.expected_value,
        }


@dataclass(frozen=True, order=True)
class JsSymbol:
    """A global function or variable visible after cross-origin inclusion.

    Functions carry a hash of their exact source slice (what toString()
    returns); variables may carry a canonical literal value when one is
    statically known.
    """

    name: str
    symbol_kind: str  # function | variable
    expected_value: str | None = None
    source_hash: str | None = None

    def __post_init__(self) -> None:
        if self.symbol_kind not in ("function", "variable"):
            raise ValueError(f"bad symbol kind: {self.symbol_kind!r}")
        if not _IDENT_RE.match(self.name):
            raise ValueError(f"not a valid identifier: {self.name!r}")

    def to_json(self) -> dict:
        out: dict = {
            "kind": "js_symbol",
            "name": self.name,
            "symbol_kind": self.symbol_kind,
        }
        if self.expected_value is not None:
            out["expected_value"] = self.expected_value
        if self.source_hash is not None:
            out["source_hash"] = self.source_hash
        return out


Subfeature = ImageDimension | CssDirective | JsSymbol

_FILETYPE_FOR_SUBFEATURE = {
    ImageDimension: "image",
    CssDirective: "css",
    JsSymbol: "js",
}


def subfeature_from_json(obj: dict) -> Subfeature:
    kind = obj.get("kind")
    if kind == "image_dimension":
        return ImageDimension(obj["width"], obj["height"])
    if kind == "css_directive":
        return CssDirective(
            obj["selector_kind"], obj["selector_name"], obj["element_type"],
            obj["property"], obj["expected_value"],
        )
    if kind == "js_symbol":
        return JsSymbol(
            obj["name"], obj["symbol_kind"],
            obj.get("expected_value"), obj.get("source_hash"),
        )
    raise ValueError(f"unknown subfeature kind: {kind!r}")


def subfeature_key(sub: Subfeature) -> str:
    """Stable canonical form, usable as a dict key or for ordering."""
    return json.dumps(sub.to_json(), sort_keys=True)


@dataclass
class Feature:
    """One probeable file and its observable attributes."""

    path: str
    filetype: str  # image | css | js
    subfeatures: list[Subfeature]
    compat: list[str] = field(default_factory=list)  # aligned with subfeatures

    def __post_init__(self) -> None:
        if not self.subfeatures:
            raise ValueError("a feature needs at least one subfeature")
        for sub in self.subfeatures:
            expected = _FILETYPE_FOR_SUBFEATURE[type(sub)]
            if expected != self.filetype:
                raise ValueError(
                    f"{type(sub).__name__} does not belong in a {self.filetype} feature"
                )
        if not self.compat:
            self.compat = [VERIFIED] * len(self.subfeatures)
        elif len(self.compat) != len(self.subfeatures):
            raise ValueError("compat flags must align with subfeatures")

    def verified_subfeatures(self) -> list[Subfeature]:
        return [s for s, flag in zip(self.subfeatures, self.compat) if flag == VERIFIED]

    def to_json(self) -> dict:
        return {
            "path": self.path,
            "type": self.filetype,
            "subfeatures": [s.to_json() for s in self.subfeatures],
            "compat": list(self.compat),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Feature":
        return cls(
            path=obj["path"],
            filetype=obj["type"],
            subfeatures=[subfeature_from_json(s) for s in obj["subfeatures"]],
            compat=list(obj.get("compat", [])),
        )


@dataclass
class FeatureVector:
    """Every feature describing one service version."""

    service: ServiceId
    features: list[Feature] = field(default_factory=list)

    def __post_init__(self) -> None:
        paths = [f.path for f in self.features]
        if len(paths) != len(set(paths)):
            raise ValueError("duplicate feature paths in vector")

    def feature_at(self, path: str) -> Feature | None:
        for f in self.features:
            if f.path == path:
                return f
        return None

    def to_json(self) -> dict:
        return {
            "service": self.service.to_json(),
            "features": [f.to_json() for f in self.features],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FeatureVector":
        return cls(
            service=ServiceId.from_json(obj["service"]),
            features=[Feature.from_json(f) for f in obj["features"]],
        )
