"""Deterministic honeycomb images with exact ground truth.

A pointy-top hexagonal lattice is built on the integer grid
(u * sqrt(3)/2 * R, v * R / 2), so shared cell corners coincide exactly and
node identity never depends on floating-point equality. Nodes are then
jittered, edges stroked onto the raster, and the image degraded with an
illumination ramp, blur, and seeded Gaussian noise.
"""

import math
from dataclasses import dataclass

import numpy as np

from .canny import blur_float
from .raster import as_gray
from .rng import Xoshiro256StarStar

MAX_SIDE = 4096


@dataclass(frozen=True)
class CellGraph:
    """Ground-truth lattice: subpixel nodes, index-pair edges, raster size."""

    nodes: np.ndarray               # (n, 2) float64, (x, y)
    edges: list                     # [(i, j), ...] with i < j
    image_size: tuple               # (width, height)

    def to_json_dict(self):
        return {
            "image_size": list(self.image_size),
            "nodes": [[float(x), float(y)] for x, y in self.nodes],
            "edges": [[int(i), int(j)] for i, j in self.edges],
        }

    @classmethod
    def from_json_dict(cls, d):
        for key in ("image_size", "nodes", "edges"):
            if key not in d:
                raise ValueError(f"ground-truth JSON missing key {key!r}")
        nodes = np.array(d["nodes"], dtype=np.float64).reshape(-1, 2)
        edges = [(int(i), int(j)) for i, j in d["edges"]]
        n = len(nodes)
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ValueError(f"ground-truth edge ({i}, {j}) out of range")
        return cls(nodes=nodes, edges=edges, image_size=tuple(d["image_size"]))

    def degrees(self):
        deg = np.zeros(len(self.nodes), dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg


@dataclass(frozen=True)
class SynthParams:
    cols: int = 12
    rows: int = 10
    cell_radius: float = 24.0
    wall_thickness: float = 3.0
    jitter: float = 0.15
    noise_sigma: float = 8.0
    gradient_strength: float = 20.0
    blur_sigma: float = 0.8
    wall_intensity: int = 255
    background_intensity: int = 0
    seed: int = 1

    def __post_init__(self):
        if self.cols < 1 or self.rows < 1:
            raise ValueError("cols and rows must be >= 1")
        if self.cell_radius < 4:
            raise ValueError("cell_radius must be >= 4 px")
        if self.wall_thickness < 1:
            raise ValueError("wall_thickness must be >= 1 px")
        if not 0 <= self.jitter <= 0.4:
            raise ValueError("jitter must lie in [0, 0.4] so edges cannot cross")
        if self.noise_sigma < 0 or self.blur_sigma < 0:
            raise ValueError("noise_sigma and blur_sigma must be >= 0")
        for v in (self.wall_intensity, self.background_intensity):
            if not 0 <= v <= 255:
                raise ValueError("intensities must lie in [0, 255]")
        if self.wall_intensity == self.background_intensity:
            raise ValueError("wall and background intensity must differ")


def _lattice(cols, rows):
    """Integer-grid corners of a pointy-top hex lattice.

    Cell (row, col) center sits at u = 2*col + (row % 2) + 1, v = 3*row + 2;
    its corners are (u +- 1, v +- 1) and (u, v +- 2). Returns the
    deduplicated corner list (sorted by (v, u)) and per-cell corner cycles.
    """
    corner_index = {}
    cells = []
    for row in range(rows):
        for col in range(cols):
            cu = 2 * col + (row % 2) + 1
            cv = 3 * row + 2
            ring = [(cu, cv - 2), (cu + 1, cv - 1), (cu + 1, cv + 1),
                    (cu, cv + 2), (cu - 1, cv + 1), (cu - 1, cv - 1)]
            for key in ring:
                corner_index.setdefault(key, None)
            cells.append(ring)
    ordered = sorted(corner_index, key=lambda uv: (uv[1], uv[0]))
    for i, key in enumerate(ordered):
        corner_index[key] = i
    edges = set()
    for ring in cells:
        for a, b in zip(ring, ring[1:] + ring[:1]):
            i, j = corner_index[a], corner_index[b]
            edges.add((min(i, j), max(i, j)))
    return ordered, corner_index, sorted(edges)


def _stroke(img, p, q, half_width, value):
    """Set pixels whose center lies within half_width of segment pq."""
    h, w = img.shape
    x0 = max(0, int(math.floor(min(p[0], q[0]) - half_width - 1)))
    x1 = min(w - 1, int(math.ceil(max(p[0], q[0]) + half_width + 1)))
    y0 = max(0, int(math.floor(min(p[1], q[1]) - half_width - 1)))
    y1 = min(h - 1, int(math.ceil(max(p[1], q[1]) + half_width + 1)))
    if x0 > x1 or y0 > y1:
        return
    xs = np.arange(x0, x1 + 1, dtype=np.float64)
    ys = np.arange(y0, y1 + 1, dtype=np.float64)
    gx, gy = np.meshgrid(xs, ys)
    dx, dy = q[0] - p[0], q[1] - p[1]
    dd = dx * dx + dy * dy
    if dd == 0:
        dist = np.hypot(gx - p[0], gy - p[1])
    else:
        t = np.clip(((gx - p[0]) * dx + (gy - p[1]) * dy) / dd, 0.0, 1.0)
        dist = np.hypot(gx - (p[0] + t * dx), gy - (p[1] + t * dy))
    img[y0:y1 + 1, x0:x1 + 1][dist <= half_width] = value


def _apply_gradient(f, strength, width):
    if strength == 0 or width == 1:
        return f
    ramp = -strength + 2.0 * strength * np.arange(width) / (width - 1)
    return f + ramp[None, :]


def _apply_noise(f, sigma, rng):
    if sigma == 0:
        return f
    noise = rng.gaussians(f.size, sigma=sigma).reshape(f.shape)
    return f + noise


def _finalize(f):
    return np.clip(np.floor(f + 0.5), 0, 255).astype(np.uint8)


def generate(params):
    """Render one honeycomb image and its exact pre-raster cell graph.

    Randomness order per seed: two uniforms per node for jitter (angle, then
    radius, uniform over the disk of radius jitter * cell_radius), followed by
    the row-major Box-Muller noise stream.
    """
    r = params.cell_radius
    margin = math.ceil(0.6 * r + params.wall_thickness)
    corners, _, edges = _lattice(params.cols, params.rows)
    us = np.array([u for u, _ in corners], dtype=np.float64)
    vs = np.array([v for _, v in corners], dtype=np.float64)
    x = margin + (us - us.min()) * (math.sqrt(3.0) / 2.0) * r
    y = margin + (vs - vs.min()) * (r / 2.0)
    width = int(math.ceil(x.max())) + margin + 1
    height = int(math.ceil(y.max())) + margin + 1
    if width > MAX_SIDE or height > MAX_SIDE:
        raise ValueError(f"derived image size {width}x{height} exceeds {MAX_SIDE} px per side")

    rng = Xoshiro256StarStar(params.seed)
    nodes = np.stack([x, y], axis=1)
    if params.jitter > 0:
        for i in range(len(nodes)):
            angle = 2.0 * math.pi * rng.random()
            radius = params.jitter * r * math.sqrt(rng.random())
            nodes[i, 0] += radius * math.cos(angle)
            nodes[i, 1] += radius * math.sin(angle)

    img = np.full((height, width), float(params.background_intensity))
    half = params.wall_thickness / 2.0
    for i, j in edges:
        _stroke(img, nodes[i], nodes[j], half, float(params.wall_intensity))

    img = _apply_gradient(img, params.gradient_strength, width)
    if params.blur_sigma > 0:
        img = blur_float(img, params.blur_sigma)
    img = _apply_noise(img, params.noise_sigma, rng)
    graph = CellGraph(nodes=nodes, edges=list(edges), image_size=(width, height))
    return _finalize(img), graph


def degrade(img, noise_sigma=0.0, gradient_strength=0.0, blur_sigma=0.0, seed=0):
    """Apply the generator's degradation stack to an arbitrary image."""
    f = as_gray(img).astype(np.float64)
    f = _apply_gradient(f, gradient_strength, f.shape[1])
    if blur_sigma > 0:
        f = blur_float(f, blur_sigma)
    f = _apply_noise(f, noise_sigma, Xoshiro256StarStar(seed))
    return _finalize(f)
