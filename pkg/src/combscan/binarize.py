"""Foreground masks from grayscale images: static threshold and Otsu."""

import numpy as np

from .raster import as_gray


def histogram(img):
    """256-bin intensity histogram; counts[v] = number of pixels with value v."""
    return np.bincount(as_gray(img).ravel(), minlength=256)


def threshold_binary(img, t):
    """Foreground = pixels strictly greater than t."""
    if not 0 <= t <= 255:
        raise ValueError(f"threshold must be in [0, 255], got {t}")
    return as_gray(img) > t


def otsu_threshold(img):
    """Smallest threshold maximizing the between-class variance.

    Class 0 holds pixels <= t, class 1 pixels > t; a class with zero weight
    contributes zero variance. The maximization runs in exact integer
    arithmetic, so ties resolve deterministically toward the smaller t.

    The between-class variance is w0*w1*(mu0 - mu1)^2, which for fixed pixel
    count is ordered identically to (s0*n1 - s1*n0)^2 / (n0*n1) with n the
    class counts and s the class intensity sums.
    """
    counts = histogram(img)
    n_cum = np.cumsum(counts)
    s_cum = np.cumsum(counts * np.arange(256, dtype=np.int64))
    n_total = int(n_cum[-1])
    s_total = int(s_cum[-1])

    best_t = 0
    best_num, best_den = 0, 1
    for t in range(256):
        n0 = int(n_cum[t])
        n1 = n_total - n0
        if n0 == 0 or n1 == 0:
            continue
        s0 = int(s_cum[t])
        num = (s0 * n1 - (s_total - s0) * n0) ** 2
        den = n0 * n1
        if num * best_den > best_num * den:
            best_num, best_den, best_t = num, den, t
    return best_t


def binarize_otsu(img):
    """Threshold at the Otsu-optimal value."""
    return threshold_binary(img, otsu_threshold(img))
