"""Binary erosion, dilation, opening, and the morphological skeleton."""

from dataclasses import dataclass

import numpy as np

from .raster import as_binary


@dataclass(frozen=True)
class StructuringElement:
    """Odd-sized binary mask anchored at its center cell."""

    mask: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool)
        if m.ndim != 2 or m.shape[0] % 2 == 0 or m.shape[1] % 2 == 0:
            raise ValueError(f"structuring element must be 2-D with odd sides, got shape {m.shape}")
        if not m.any():
            raise ValueError("structuring element must have at least one set cell")
        if not m[m.shape[0] // 2, m.shape[1] // 2]:
            raise ValueError("structuring element anchor (center cell) must be set")
        object.__setattr__(self, "mask", m)

    @property
    def offsets(self):
        """(dy, dx) of every set cell relative to the anchor."""
        ys, xs = np.nonzero(self.mask)
        return list(zip(ys - self.mask.shape[0] // 2, xs - self.mask.shape[1] // 2))


def se_square(n):
    """Full n x n structuring element, n odd."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"structuring element size must be odd and >= 1, got {n}")
    return StructuringElement(np.ones((n, n), dtype=bool))


def se_cross(n):
    """Plus-shaped n x n structuring element, n odd."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"structuring element size must be odd and >= 1, got {n}")
    mask = np.zeros((n, n), dtype=bool)
    mask[n // 2, :] = True
    mask[:, n // 2] = True
    return StructuringElement(mask)


def se_from_spec(spec):
    """Parse a "shape:size" spec, e.g. "square:5" or "cross:3"."""
    try:
        shape, _, size = spec.partition(":")
        size = int(size)
    except (AttributeError, ValueError):
        raise ValueError(f"bad structuring element spec {spec!r}, expected 'square:N' or 'cross:N'")
    if shape == "square":
        return se_square(size)
    if shape == "cross":
        return se_cross(size)
    raise ValueError(f"unknown structuring element shape {shape!r}")


def reflect(se):
    """Point reflection through the anchor; identity for symmetric masks."""
    return StructuringElement(se.mask[::-1, ::-1].copy())


def _shifted(img, dy, dx, fill):
    """img translated so that out[y, x] = img[y + dy, x + dx], padded with fill."""
    h, w = img.shape
    out = np.full((h, w), fill, dtype=bool)
    ys0, ys1 = max(0, dy), min(h, h + dy)
    xs0, xs1 = max(0, dx), min(w, w + dx)
    if ys0 < ys1 and xs0 < xs1:
        out[ys0 - dy:ys1 - dy, xs0 - dx:xs1 - dx] = img[ys0:ys1, xs0:xs1]
    return out


def erode(bin_img, se, border=0):
    """Pixel survives iff every set SE cell lands on foreground.

    Cells falling outside the image read as `border` (0 loses a band of
    pixels at the rim, the default; 1 is the convention that makes the
    complement identity with dilation exact on the full image).
    """
    img = as_binary(bin_img)
    out = np.ones(img.shape, dtype=bool)
    fill = bool(border)
    for dy, dx in se.offsets:
        out &= _shifted(img, dy, dx, fill)
    return out


def dilate(bin_img, se):
    """Pixel set iff some set cell of the reflected SE lands on foreground."""
    img = as_binary(bin_img)
    out = np.zeros(img.shape, dtype=bool)
    for dy, dx in se.offsets:
        out |= _shifted(img, -dy, -dx, False)
    return out


def opening(bin_img, se):
    """Erosion followed by dilation with the same SE."""
    return dilate(erode(bin_img, se), se)


def skeletonize(bin_img, se):
    """Morphological skeleton: union over k of erode^k minus its opening.

    Starts from the image itself (k = 0) and stops once the eroded image is
    empty; the iteration count is capped at max(width, height), which the
    border rule guarantees is enough for any SE that actually shrinks.
    """
    eroded = as_binary(bin_img).copy()
    skel = np.zeros(eroded.shape, dtype=bool)
    for _ in range(max(eroded.shape)):
        if not eroded.any():
            break
        skel |= eroded & ~opening(eroded, se)
        eroded = erode(eroded, se)
    return skel
