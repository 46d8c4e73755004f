"""Image containers, PNM I/O, and binary-image set algebra.

Images are plain numpy arrays with a fixed convention shared by the whole
package: shape (height, width), origin at the top-left corner, x growing
rightward (columns), y growing downward (rows).

* grayscale image: dtype uint8
* binary image:    dtype bool (False = background, True = foreground)

All operations are pure; inputs are never mutated.
"""

import numpy as np


class PnmParseError(ValueError):
    """Malformed PNM stream; message carries the failing byte offset."""


def as_gray(img):
    """Validate and return a grayscale image as a uint8 array.

    Accepts any integer array with values in [0, 255]; rejects wrong
    dimensionality or out-of-range values.
    """
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D grayscale image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"grayscale image must be integer-valued, got dtype {arr.dtype}")
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("grayscale values must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def as_binary(img):
    """Validate and return a binary image as a bool array."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D binary image, got shape {arr.shape}")
    if arr.dtype != bool:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"binary image must be bool or integer, got dtype {arr.dtype}")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("binary image values must be 0 or 1")
        arr = arr.astype(bool)
    return arr


def _check_same_shape(a, b, op):
    if a.shape != b.shape:
        raise ValueError(f"{op}: shape mismatch {a.shape} vs {b.shape}")


class _PnmReader:
    """Tokenizer for binary PNM headers; tracks byte offsets for errors."""

    def __init__(self, data):
        self.data = data
        self.pos = 0

    def fail(self, why):
        raise PnmParseError(f"{why} at byte offset {self.pos}")

    def _skip_space_and_comments(self):
        d = self.data
        while self.pos < len(d):
            c = d[self.pos]
            if c in b" \t\r\n":
                self.pos += 1
            elif c == ord("#"):
                while self.pos < len(d) and d[self.pos] != ord("\n"):
                    self.pos += 1
            else:
                return

    def read_int(self, what):
        self._skip_space_and_comments()
        start = self.pos
        d = self.data
        while self.pos < len(d) and ord("0") <= d[self.pos] <= ord("9"):
            self.pos += 1
        if self.pos == start:
            self.fail(f"expected {what}")
        return int(d[start:self.pos])


def load_pnm(data):
    """Decode a binary PGM (P5) or PPM (P6) byte stream into a grayscale image.

    P6 pixels are reduced to luma with Rec.601 weights, rounded half up.
    Header comments are skipped; maxval must be <= 255.
    """
    r = _PnmReader(bytes(data))
    if len(r.data) < 2:
        r.fail("truncated header")
    magic = r.data[:2]
    if magic not in (b"P5", b"P6"):
        r.fail(f"unsupported magic {magic!r}")
    r.pos = 2
    width = r.read_int("width")
    height = r.read_int("height")
    maxval = r.read_int("maxval")
    if width < 1 or height < 1:
        r.fail(f"invalid dimensions {width}x{height}")
    if maxval < 1 or maxval > 255:
        r.fail(f"unsupported maxval {maxval}")
    # exactly one whitespace byte separates header and payload when present
    if r.pos < len(r.data) and r.data[r.pos] in b" \t\r\n":
        r.pos += 1
    channels = 1 if magic == b"P5" else 3
    need = width * height * channels
    payload = r.data[r.pos:r.pos + need]
    if len(payload) < need:
        r.pos += len(payload)
        r.fail(f"truncated payload, need {need} bytes")
    raw = np.frombuffer(payload, dtype=np.uint8)
    if channels == 1:
        return raw.reshape(height, width).copy()
    rgb = raw.reshape(height, width, 3).astype(np.float64)
    luma = 0.299 * rgb[:, :, 0] + 0.587 * rgb[:, :, 1] + 0.114 * rgb[:, :, 2]
    return np.floor(luma + 0.5).astype(np.uint8)


def save_pgm(img):
    """Encode a grayscale image as a binary PGM (P5) byte stream.

    Round-trips bit-exactly through load_pnm.
    """
    img = as_gray(img)
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes()


def binary_to_gray(bin_img):
    """Map foreground to 255 and background to 0."""
    return np.where(as_binary(bin_img), 255, 0).astype(np.uint8)


def bin_and(a, b):
    a, b = as_binary(a), as_binary(b)
    _check_same_shape(a, b, "bin_and")
    return a & b


def bin_or(a, b):
    a, b = as_binary(a), as_binary(b)
    _check_same_shape(a, b, "bin_or")
    return a | b


def bin_sub(a, b):
    """Set difference: a AND NOT b."""
    a, b = as_binary(a), as_binary(b)
    _check_same_shape(a, b, "bin_sub")
    return a & ~b


def bin_not(a):
    return ~as_binary(a)
