"""SVG overlays: source raster underneath, detected geometry on top."""

import base64
import struct
import zlib

from .raster import as_gray


def png_bytes(img):
    """Minimal deterministic grayscale PNG encoding (for SVG embedding)."""
    img = as_gray(img)
    h, w = img.shape

    def chunk(tag, payload):
        body = tag + payload
        return struct.pack(">I", len(payload)) + body + struct.pack(">I", zlib.crc32(body))

    raw = b"".join(b"\x00" + img[y].tobytes() for y in range(h))
    return b"".join([
        b"\x89PNG\r\n\x1a\n",
        chunk(b"IHDR", struct.pack(">IIBBBBB", w, h, 8, 0, 0, 0, 0)),
        chunk(b"IDAT", zlib.compress(raw, 9)),
        chunk(b"IEND", b""),
    ])


def svg_overlay(img, segments, nodes):
    """Stand-alone SVG: the image as an embedded raster, segments as red
    strokes, nodes as yellow circles."""
    img = as_gray(img)
    h, w = img.shape
    b64 = base64.b64encode(png_bytes(img)).decode("ascii")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<image href="data:image/png;base64,{b64}" width="{w}" height="{h}"/>',
    ]
    for s in segments:
        parts.append(
            f'<line x1="{s.x1}" y1="{s.y1}" x2="{s.x2}" y2="{s.y2}" '
            f'stroke="#e33" stroke-width="1"/>'
        )
    for x, y in nodes:
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="none" stroke="#fd0"/>')
    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8")
