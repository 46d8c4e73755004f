"""Straight-line detection: accumulator voting, peak picking, segment walking.

Lines use the normal parameterization x*cos(theta) + y*sin(theta) = rho with
theta in [0, pi), so horizontal rows peak at theta = pi/2 with rho = y and
vertical columns at theta = 0 with rho = x.
"""

import math
from dataclasses import dataclass

import numpy as np

from .raster import as_binary


@dataclass(frozen=True)
class PolarLine:
    rho: float
    theta: float


@dataclass(frozen=True)
class Segment:
    """Pixel-coordinate segment, canonicalized so (x1, y1) <= (x2, y2)."""

    x1: int
    y1: int
    x2: int
    y2: int

    def __post_init__(self):
        if (self.x1, self.y1) > (self.x2, self.y2):
            x1, y1, x2, y2 = self.x2, self.y2, self.x1, self.y1
            object.__setattr__(self, "x1", x1)
            object.__setattr__(self, "y1", y1)
            object.__setattr__(self, "x2", x2)
            object.__setattr__(self, "y2", y2)

    @property
    def length(self):
        return math.hypot(self.x2 - self.x1, self.y2 - self.y1)

    def as_tuple(self):
        return (self.x1, self.y1, self.x2, self.y2)


@dataclass(frozen=True)
class HoughParams:
    """Voting and extraction tunables.

    Defaults are calibrated on the canonical synthetic corpus (cell radius
    24 px, 3 px walls): min_len tracks the cell edge length and rho_res sets
    the support band, so rescale both when detecting much smaller or larger
    cells.
    """

    rho_res: float = 0.75
    theta_res: float = math.pi / 180.0
    votes_min: int = 16
    min_len: float = 19.0
    max_gap: float = 1.0
    peak_window: int = 7

    def __post_init__(self):
        if min(self.rho_res, self.theta_res, self.votes_min,
               self.min_len, self.max_gap, self.peak_window) <= 0:
            raise ValueError("all Hough parameters must be strictly positive")
        if self.n_theta < 4:
            raise ValueError(f"theta_res must divide pi into >= 4 bins, got {self.n_theta}")

    @property
    def n_theta(self):
        return max(1, int(round(math.pi / self.theta_res)))


@dataclass(frozen=True)
class Accumulator:
    votes: np.ndarray          # shape (n_rho, n_theta), uint32
    rho_offset: float          # rho represented by bin 0 (= -diagonal)
    rho_res: float
    theta_res: float

    @property
    def n_rho(self):
        return self.votes.shape[0]

    @property
    def n_theta(self):
        return self.votes.shape[1]


def _diagonal(shape):
    h, w = shape
    return math.ceil(math.hypot(w, h))


def accumulate(bin_img, params):
    """Vote each foreground pixel into every theta bin at its rounded rho.

    Bin centers sit at theta = j * theta_res and rho = -diag + i * rho_res;
    rho rounds half away from zero in bin units, which for the non-negative
    shifted index is plain half-up.
    """
    img = as_binary(bin_img)
    diag = _diagonal(img.shape)
    n_theta = params.n_theta
    n_rho = int(math.floor(2 * diag / params.rho_res + 0.5)) + 1
    votes = np.zeros((n_rho, n_theta), dtype=np.uint32)
    ys, xs = np.nonzero(img)
    if len(xs) == 0:
        return Accumulator(votes, -float(diag), params.rho_res, params.theta_res)
    thetas = np.arange(n_theta) * params.theta_res
    for j, (c, s) in enumerate(zip(np.cos(thetas), np.sin(thetas))):
        idx = np.floor((xs * c + ys * s + diag) / params.rho_res + 0.5).astype(np.intp)
        votes[:, j] += np.bincount(idx, minlength=n_rho).astype(np.uint32)
    return Accumulator(votes, -float(diag), params.rho_res, params.theta_res)


def find_peaks(acc, params):
    """Bins above votes_min that dominate their peak_window neighborhood.

    Equal-vote neighbors are resolved toward the smaller (theta bin, rho bin)
    pair; output is sorted by votes descending, then (theta, rho) ascending.
    """
    votes = acc.votes.astype(np.int64)
    n_rho, n_theta = votes.shape
    half = params.peak_window // 2
    candidate = votes >= params.votes_min
    if not candidate.any():
        return []
    keys = np.arange(n_rho)[:, None] + n_rho * np.arange(n_theta)[None, :]  # (theta, rho) lex order
    is_peak = candidate.copy()
    for dr in range(-half, half + 1):
        for dt in range(-half, half + 1):
            if dr == 0 and dt == 0:
                continue
            shifted = np.zeros_like(votes)
            ks = np.full_like(keys, np.iinfo(np.int64).max)
            r0, r1 = max(0, dr), min(n_rho, n_rho + dr)
            t0, t1 = max(0, dt), min(n_theta, n_theta + dt)
            shifted[r0 - dr:r1 - dr, t0 - dt:t1 - dt] = votes[r0:r1, t0:t1]
            ks[r0 - dr:r1 - dr, t0 - dt:t1 - dt] = keys[r0:r1, t0:t1]
            is_peak &= (votes > shifted) | ((votes == shifted) & (keys < ks))
    rs, ts = np.nonzero(is_peak)
    order = sorted(range(len(rs)), key=lambda i: (-votes[rs[i], ts[i]], ts[i], rs[i]))
    return [
        PolarLine(rho=acc.rho_offset + rs[i] * acc.rho_res, theta=ts[i] * acc.theta_res)
        for i in order
    ]


def _line_walk(shape, line):
    """Sample the infinite line at unit steps along its dominant axis.

    Returns (positions, minor_axis) where positions[k] = (x, y) floats and
    minor_axis is 1 if y is interpolated (near-horizontal walk), else 0.
    """
    h, w = shape
    c, s = math.cos(line.theta), math.sin(line.theta)
    if abs(s) >= abs(c):  # direction (-s, c) is x-dominant: walk columns
        xs = np.arange(w, dtype=np.float64)
        ys = (line.rho - xs * c) / s
        return np.stack([xs, ys], axis=1), 1
    ys = np.arange(h, dtype=np.float64)
    xs = (line.rho - ys * s) / c
    return np.stack([xs, ys], axis=1), 0


def extract_segments(bin_img, line, params):
    """Foreground runs along a detected line, split at gaps > max_gap.

    A walk position is supported when some foreground pixel in the minor-axis
    window lies within rho_res perpendicular distance of the line; runs
    shorter than min_len are dropped.
    """
    img = as_binary(bin_img)
    h, w = img.shape
    c, s = math.cos(line.theta), math.sin(line.theta)
    positions, minor = _line_walk(img.shape, line)
    reach = int(math.ceil(params.rho_res * math.sqrt(2.0))) + 1

    major = positions[:, 1 - minor].astype(np.intp)
    base = np.floor(positions[:, minor] + 0.5).astype(np.intp)
    offs = np.arange(-reach, reach + 1)
    cand = base[:, None] + offs[None, :]
    in_bounds = (cand >= 0) & (cand < (h if minor == 1 else w))
    safe = np.clip(cand, 0, (h if minor == 1 else w) - 1)
    if minor == 1:
        fg = img[safe, major[:, None]]
        perp = np.abs(major[:, None] * c + cand * s - line.rho)
    else:
        fg = img[major[:, None], safe]
        perp = np.abs(cand * c + major[:, None] * s - line.rho)
    support = (in_bounds & fg & (perp <= params.rho_res)).any(axis=1)

    segments = []
    idx = np.nonzero(support)[0]
    if len(idx) == 0:
        return segments
    breaks = np.nonzero(np.diff(idx) - 1 > params.max_gap)[0]
    starts = np.concatenate([[0], breaks + 1])
    ends = np.concatenate([breaks, [len(idx) - 1]])
    for a, b in zip(starts, ends):
        seg = _run_to_segment(positions, idx[a], idx[b], img.shape)
        if seg is not None and seg.length >= params.min_len:
            segments.append(seg)
    return segments


def _run_to_segment(positions, start, end, shape):
    h, w = shape
    x1, y1 = positions[start]
    x2, y2 = positions[end]
    p = [int(min(max(math.floor(v + 0.5), 0), lim - 1))
         for v, lim in ((x1, w), (y1, h), (x2, w), (y2, h))]
    if (p[0], p[1]) == (p[2], p[3]):
        return None
    return Segment(p[0], p[1], p[2], p[3])


def hough_segments(bin_img, params):
    """Accumulate, pick peaks, walk each peak line, and canonicalize."""
    acc = accumulate(bin_img, params)
    peaks = find_peaks(acc, params)
    segments = []
    for line in peaks:
        segments.extend(extract_segments(bin_img, line, params))
    unique = sorted(set(seg.as_tuple() for seg in segments))
    return [Segment(*t) for t in unique]
