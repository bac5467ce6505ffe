"""Image dimension extraction from raw headers.

Only the formats whose dimensions a browser exposes cross-origin and that
dominate real corpora are handled: PNG (IHDR), GIF (logical screen
descriptor) and JPEG (SOF frame headers). Anything else, including SVG,
yields None; a probe can still observe such files but we cannot predict
their reported dimensions statically.
"""

from __future__ import annotations

import struct

__all__ = ["parse_image_dimensions"]

_PNG_SIG = b"\x89PNG\r\n\x1a\n"
_SOF_MARKERS = frozenset(
    range(0xC0, 0xD0)
) - {0xC4, 0xC8, 0xCC}  # SOF0-15 minus DHT/JPG/DAC


def _png_dimensions(data: bytes) -> tuple[int, int] | None:
    if len(data) < 24 or data[12:16] != b"IHDR":
        return None
    width, height = struct.unpack(">II", data[16:24])
    return width, height


def _gif_dimensions(data: bytes) -> tuple[int, int] | None:
    if len(data) < 10:
        return None
    width, height = struct.unpack("<HH", data[6:10])
    return width, height


def _jpeg_dimensions(data: bytes) -> tuple[int, int] | None:
    i = 2
    n = len(data)
    while i + 4 <= n:
        if data[i] != 0xFF:
            return None
        marker = data[i + 1]
        if marker == 0xFF:  # fill byte
            i += 1
            continue
        if marker in (0xD8, 0x01) or 0xD0 <= marker <= 0xD7:
            i += 2
            continue
        if marker == 0xD9:  # EOI before any SOF
            return None
        seg_len = struct.unpack(">H", data[i + 2:i + 4])[0]
        if seg_len < 2:
            return None
        if marker in _SOF_MARKERS:
            if i + 9 > n:
                return None
            height, width = struct.unpack(">HH", data[i + 5:i + 9])
            return width, height
        i += 2 + seg_len
    return None


def parse_image_dimensions(data: bytes) -> tuple[int, int] | None:
    """Return (width, height) or None when the header is foreign or broken."""
    dims = None
    if data.startswith(_PNG_SIG):
        dims = _png_dimensions(data)
    elif data.startswith(b"GIF87a") or data.startswith(b"GIF89a"):
        dims = _gif_dimensions(data)
    elif data.startswith(b"\xff\xd8"):
        dims = _jpeg_dimensions(data)
    if dims is None:
        return None
    width, height = dims
    if width <= 0 or height <= 0:
        return None
    return width, height
