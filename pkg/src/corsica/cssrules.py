"""Stylesheet rule extraction and computed-value canonicalization.

The parser is deliberately small: it recovers rule sets whose selector is
a single simple selector (bare type, one class, or one id) and whose
declarations use longhand properties with engine-stable computed values.
Everything else is skipped, because a probe could not reliably verify it
across engines. Malformed input never raises; broken rules are dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "LONGHAND_WHITELIST",
    "RawDirective",
    "canonical_value",
    "extract_directives",
]

COLOR_PROPS = frozenset({"color", "background-color"})
LENGTH_PROPS = frozenset({
    "margin-top", "margin-left", "padding-top", "padding-left",
    "width", "height", "font-size", "border-top-width", "line-height",
})
NUMBER_PROPS = frozenset({"opacity", "z-index"})
KEYWORD_PROPS = frozenset({"display", "position", "float", "text-align"})

# Longhands whose computed values serialize identically across engines.
# Shorthands are excluded: engines expand them differently.
LONGHAND_WHITELIST = COLOR_PROPS | LENGTH_PROPS | NUMBER_PROPS | KEYWORD_PROPS

# Colors whose rgb() serialization we pin down; other color keywords are
# kept as lowercased keywords and verified by the runtime if at all.
NAMED_COLORS = {
    "black": (0, 0, 0),
    "silver": (192, 192, 192),
    "gray": (128, 128, 128),
    "white": (255, 255, 255),
    "maroon": (128, 0, 0),
    "red": (255, 0, 0),
    "purple": (128, 0, 128),
    "fuchsia": (255, 0, 255),
    "magenta": (255, 0, 255),
    "green": (0, 128, 0),
    "lime": (0, 255, 0),
    "olive": (128, 128, 0),
    "yellow": (255, 255, 0),
    "navy": (0, 0, 128),
    "blue": (0, 0, 255),
    "teal": (0, 128, 128),
    "aqua": (0, 255, 255),
    "cyan": (0, 255, 255),
    "orange": (255, 165, 0),
}

_TYPE_SEL_RE = re.compile(r"^[A-Za-z][A-Za-z0-9-]*$")
_CLASS_SEL_RE = re.compile(r"^\.([A-Za-z_-][A-Za-z0-9_-]*)$")
_ID_SEL_RE = re.compile(r"^#([A-Za-z_-][A-Za-z0-9_-]*)$")
_COMMENT_RE = re.compile(r"/\*.*?\*/", re.S)
_HEX_RE = re.compile(r"^#([0-9a-fA-F]{3,8})$")
_RGB_RE = re.compile(
    r"^rgba?\(\s*(\d{1,3})\s*,\s*(\d{1,3})\s*,\s*(\d{1,3})\s*(?:,\s*([0-9.]+)\s*)?\)$",
    re.I,
)
_PX_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+))px$", re.I)
_NUMBER_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)$")
_KEYWORD_RE = re.compile(r"^[A-Za-z-]+$")


@dataclass(frozen=True)
class RawDirective:
    selector_kind: str  # type | class | id
    selector_name: str
    element_type: str
    property: str
    value: str  # canonical


def _shortest_number(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _canonical_color(value: str) -> str | None:
    value = value.strip()
    m = _HEX_RE.match(value)
    if m:
        digits = m.group(1)
        if len(digits) in (3, 4):
            digits = "".join(c * 2 for c in digits)
        if len(digits) == 6:
            r, g, b = (int(digits[i:i + 2], 16) for i in (0, 2, 4))
            return f"rgb({r}, {g}, {b})"
        if len(digits) == 8:
            r, g, b, a = (int(digits[i:i + 2], 16) for i in (0, 2, 4, 6))
            if a == 255:
                return f"rgb({r}, {g}, {b})"
            return f"rgba({r}, {g}, {b}, {_shortest_number(round(a / 255, 3))})"
        return None
    m = _RGB_RE.match(value)
    if m:
        r, g, b = (int(m.group(i)) for i in (1, 2, 3))
        if max(r, g, b) > 255:
            return None
        alpha = m.group(4)
        if alpha is None or float(alpha) == 1:
            return f"rgb({r}, {g}, {b})"
        return f"rgba({r}, {g}, {b}, {_shortest_number(float(alpha))})"
    low = value.lower()
    if low == "transparent":
        return "rgba(0, 0, 0, 0)"
    if low in NAMED_COLORS:
        r, g, b = NAMED_COLORS[low]
        return f"rgb({r}, {g}, {b})"
    if _KEYWORD_RE.match(value):
        return low
    return None


def canonical_value(prop: str, raw: str) -> str | None:
    """Canonical computed-value string, or None when unverifiable.

    Colors become rgb()/rgba(); px lengths keep their px form; other
    length units are excluded; keywords are lowercased.
    """
    value = raw.strip()
    if value.lower().endswith("!important"):
        value = value[: -len("!important")].rstrip().rstrip("!").rstrip()
    if not value:
        return None
    if prop in COLOR_PROPS:
        return _canonical_color(value)
    if prop in LENGTH_PROPS:
        m = _PX_RE.match(value)
        if m:
            return f"{_shortest_number(float(m.group(1)))}px"
        if value == "0":
            return "0px"
        if _KEYWORD_RE.match(value):
            return value.lower()
        return None
    if prop in NUMBER_PROPS:
        if _NUMBER_RE.match(value):
            return _shortest_number(float(value))
        if _KEYWORD_RE.match(value):
            return value.lower()
        return None
    if prop in KEYWORD_PROPS:
        if _KEYWORD_RE.match(value):
            return value.lower()
        return None
    return None


def _classify_selector(selector: str) -> tuple[str, str, str] | None:
    """(kind, name, element_type) for a single simple selector, else None."""
    sel = selector.strip()
    if _TYPE_SEL_RE.match(sel):
        return "type", sel.lower(), sel.lower()
    m = _CLASS_SEL_RE.match(sel)
    if m:
        return "class", m.group(1), "div"
    m = _ID_SEL_RE.match(sel)
    if m:
        return "id", m.group(1), "div"
    return None


def _iter_rules(css: str):
    """Yield (selector_text, body_text) for top-level rule sets.

    At-rules are skipped wholesale: conditional or imported rules may not
    apply to the probe document, so nothing inside them is verifiable.
    """
    i = 0
    n = len(css)
    while i < n:
        ch = css[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "@":
            # statement at-rule ends at ';', block at-rule at its matching '}'
            j = i
            while j < n and css[j] not in ";{":
                j += 1
            if j >= n:
                return
            if css[j] == ";":
                i = j + 1
                continue
            depth = 1
            j += 1
            while j < n and depth:
                if css[j] == "{":
                    depth += 1
                elif css[j] == "}":
                    depth -= 1
                j += 1
            i = j
            continue
        brace = css.find("{", i)
        if brace == -1:
            return
        selector = css[i:brace]
        end = brace + 1
        depth = 1
        while end < n and depth:
            if css[end] == "{":
                depth += 1
            elif css[end] == "}":
                depth -= 1
            end += 1
        body = css[brace + 1:end - 1] if depth == 0 else css[brace + 1:end]
        yield selector, body
        i = end


def extract_directives(data: bytes) -> list[RawDirective]:
    """All verifiable directives of a stylesheet, in document order."""
    try:
        css = data.decode("utf-8", errors="replace")
    except Exception:
        return []
    css = _COMMENT_RE.sub(" ", css)
    out: list[RawDirective] = []
    seen: set[tuple[str, str, str]] = set()
    for selector, body in _iter_rules(css):
        classified = _classify_selector(selector)
        if classified is None:
            continue
        kind, name, element_type = classified
        for decl in body.split(";"):
            if ":" not in decl:
                continue
            prop, _, raw = decl.partition(":")
            prop = prop.strip().lower()
            if prop not in LONGHAND_WHITELIST:
                continue
            value = canonical_value(prop, raw)
            if value is None:
                continue
            key = (kind, name, prop)
            if key in seen:
                # later declarations win in CSS; replace the earlier one
                out = [d for d in out
                       if (d.selector_kind, d.selector_name, d.property) != key]
            seen.add(key)
            out.append(RawDirective(kind, name, element_type, prop, value))
    return out
