"""The composite detector: threshold, skeleton/Hough stages, union, nodes.

Stage order: binarize the input, run skeleton+Hough on the raw mask, then
dilate once and run skeleton+Hough again after each of a configurable number
of erosion steps. The per-stage segment sets are merged into one list and
segment intersections are clustered into nodal points.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .binarize import binarize_otsu, threshold_binary
from .canny import canny
from .hough import HoughParams, Segment, hough_segments
from .morphology import dilate, erode, se_from_spec, skeletonize
from .raster import as_gray


@dataclass(frozen=True)
class PipelineConfig:
    threshold: int = 128
    invert_input: bool = False
    dilate_se: str = "square:5"
    erode_se: str = "square:3"
    skeleton_se: str = "cross:3"
    erosion_steps: int = 2
    hough: HoughParams = field(default_factory=HoughParams)
    merge_dist: float = 3.0
    merge_angle: float = math.radians(3.0)
    node_radius: float = 5.0

    def __post_init__(self):
        if not 0 <= self.threshold <= 255:
            raise ValueError(f"threshold must be in [0, 255], got {self.threshold}")
        if self.erosion_steps < 0:
            raise ValueError("erosion_steps must be >= 0")
        if self.merge_dist <= 0 or self.merge_angle <= 0 or self.node_radius <= 0:
            raise ValueError("merge_dist, merge_angle and node_radius must be positive")
        for spec in (self.dilate_se, self.erode_se, self.skeleton_se):
            se_from_spec(spec)

    def to_dict(self):
        return {
            "threshold": self.threshold,
            "invert_input": self.invert_input,
            "dilate_se": self.dilate_se,
            "erode_se": self.erode_se,
            "skeleton_se": self.skeleton_se,
            "erosion_steps": self.erosion_steps,
            "hough": {
                "rho_res": self.hough.rho_res,
                "theta_res": self.hough.theta_res,
                "votes_min": self.hough.votes_min,
                "min_len": self.hough.min_len,
                "max_gap": self.hough.max_gap,
                "peak_window": self.hough.peak_window,
            },
            "merge_dist": self.merge_dist,
            "merge_angle": self.merge_angle,
            "node_radius": self.node_radius,
        }

    @classmethod
    def from_dict(cls, d):
        """Build a config from a JSON-style dict; unknown keys are an error."""
        known = set(cls().to_dict())
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config key {sorted(unknown)[0]!r}")
        kwargs = dict(d)
        hough_dict = kwargs.pop("hough", None)
        if hough_dict is not None:
            hough_known = {"rho_res", "theta_res", "votes_min", "min_len", "max_gap", "peak_window"}
            bad = set(hough_dict) - hough_known
            if bad:
                raise ValueError(f"unknown config key 'hough.{sorted(bad)[0]}'")
            kwargs["hough"] = HoughParams(**hough_dict)
        return cls(**kwargs)


@dataclass(frozen=True)
class DetectionReport:
    segments: list               # merged Segment list
    nodes: list                  # [(x, y), ...] floats
    per_stage: list              # [{"label": str, "segments": int}, ...]
    config_echo: dict

    def to_json_dict(self):
        return {
            "config": self.config_echo,
            "per_stage": self.per_stage,
            "segments": [list(s.as_tuple()) for s in self.segments],
            "nodes": [[float(x), float(y)] for x, y in self.nodes],
        }


def _seg_geometry(segments):
    pts = np.array([s.as_tuple() for s in segments], dtype=np.float64)
    d = pts[:, 2:] - pts[:, :2]
    length = np.hypot(d[:, 0], d[:, 1])
    angle = np.mod(np.arctan2(d[:, 1], d[:, 0]), math.pi)
    return pts, d, length, angle


def _mergeable_with(i, js, pts, length, angle, ux, uy, nx, ny, dist_tol, angle_tol):
    """Boolean mask over js: which segments can fuse with segment i."""
    adiff = np.abs(angle[js] - angle[i]) % math.pi
    ok = np.minimum(adiff, math.pi - adiff) <= angle_tol
    if not ok.any():
        return ok
    # mutual perpendicular distance: every endpoint against the other line
    d1 = np.abs((pts[js, 0] - pts[i, 0]) * nx[i] + (pts[js, 1] - pts[i, 1]) * ny[i])
    d2 = np.abs((pts[js, 2] - pts[i, 0]) * nx[i] + (pts[js, 3] - pts[i, 1]) * ny[i])
    d3 = np.abs((pts[i, 0] - pts[js, 0]) * nx[js] + (pts[i, 1] - pts[js, 1]) * ny[js])
    d4 = np.abs((pts[i, 2] - pts[js, 0]) * nx[js] + (pts[i, 3] - pts[js, 1]) * ny[js])
    ok &= np.maximum(np.maximum(d1, d2), np.maximum(d3, d4)) <= dist_tol
    if not ok.any():
        return ok
    # projection intervals along the longer segment's direction
    share_j = length[js] > length[i]
    sux = np.where(share_j, ux[js], ux[i])
    suy = np.where(share_j, uy[js], uy[i])
    ti1 = pts[i, 0] * sux + pts[i, 1] * suy
    ti2 = pts[i, 2] * sux + pts[i, 3] * suy
    tj1 = pts[js, 0] * sux + pts[js, 1] * suy
    tj2 = pts[js, 2] * sux + pts[js, 3] * suy
    gap = np.maximum(np.minimum(tj1, tj2) - np.maximum(ti1, ti2),
                     np.minimum(ti1, ti2) - np.maximum(tj1, tj2))
    ok &= gap <= dist_tol
    return ok


def _merge_pair(a, b):
    """Minimal segment covering both projections on the longer one's axis."""
    ax, ay = a.x2 - a.x1, a.y2 - a.y1
    bx, by = b.x2 - b.x1, b.y2 - b.y1
    if math.hypot(bx, by) > math.hypot(ax, ay):
        ux, uy = bx, by
    else:
        ux, uy = ax, ay
    norm = math.hypot(ux, uy)
    ux, uy = ux / norm, uy / norm
    points = [(a.x1, a.y1), (a.x2, a.y2), (b.x1, b.y1), (b.x2, b.y2)]
    ts = [x * ux + y * uy for x, y in points]
    p_min = points[ts.index(min(ts))]
    p_max = points[ts.index(max(ts))]
    return Segment(p_min[0], p_min[1], p_max[0], p_max[1])


def merge_segments(sets, dist_tol, angle_tol):
    """Union several segment lists, fusing near-collinear overlapping pairs.

    Deterministic sweep policy: segments are kept in canonical order; each
    sweep lets segment i absorb every still-eligible later segment (its
    geometry updating as it grows), and sweeps repeat until nothing merges,
    so the result is a fixpoint and the operation is idempotent. Exact
    duplicates collapse up front.
    """
    if dist_tol <= 0 or angle_tol <= 0:
        raise ValueError("tolerances must be positive")
    segments = [Segment(*t) for t in sorted(set(s.as_tuple() for group in sets for s in group))]
    changed = True
    while changed and len(segments) > 1:
        changed = False
        segments.sort(key=Segment.as_tuple)
        pts, d, length, angle = _seg_geometry(segments)
        ux, uy = d[:, 0] / length, d[:, 1] / length
        nx, ny = -uy, ux
        i = 0
        while i < len(segments) - 1:
            js = np.arange(i + 1, len(segments))
            hit = _mergeable_with(i, js, pts, length, angle, ux, uy, nx, ny,
                                  dist_tol, angle_tol)
            if not hit.any():
                i += 1
                continue
            j = int(js[np.argmax(hit)])
            merged = _merge_pair(segments[i], segments[j])
            segments[i] = merged
            del segments[j]
            keep = np.arange(len(pts)) != j
            pts, length, angle = pts[keep], length[keep], angle[keep]
            ux, uy, nx, ny = ux[keep], uy[keep], nx[keep], ny[keep]
            t = np.array(merged.as_tuple(), dtype=np.float64)
            pts[i] = t
            mdx, mdy = t[2] - t[0], t[3] - t[1]
            length[i] = np.hypot(mdx, mdy)
            angle[i] = np.arctan2(mdy, mdx) % math.pi
            ux[i], uy[i] = mdx / length[i], mdy / length[i]
            nx[i], ny[i] = -uy[i], ux[i]
            changed = True
        segments = [Segment(*t) for t in sorted(set(s.as_tuple() for s in segments))]
    return segments


def _point_segment_dist(px, py, seg):
    dx, dy = seg.x2 - seg.x1, seg.y2 - seg.y1
    dd = dx * dx + dy * dy
    if dd == 0:
        return math.hypot(px - seg.x1, py - seg.y1)
    t = max(0.0, min(1.0, ((px - seg.x1) * dx + (py - seg.y1) * dy) / dd))
    return math.hypot(px - (seg.x1 + t * dx), py - (seg.y1 + t * dy))


def extract_nodes(segments, radius):
    """Cluster pairwise segment intersections into nodal points.

    Intersections of supporting lines count only when they fall within
    `radius` of both segments; clusters are single-linkage at `radius` and
    reported as centroids sorted by (y, x).
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    points = []
    n = len(segments)
    for i in range(n - 1):
        a = segments[i]
        adx, ady = a.x2 - a.x1, a.y2 - a.y1
        for j in range(i + 1, n):
            b = segments[j]
            bdx, bdy = b.x2 - b.x1, b.y2 - b.y1
            denom = adx * bdy - ady * bdx
            if denom == 0:
                continue
            t = ((b.x1 - a.x1) * bdy - (b.y1 - a.y1) * bdx) / denom
            px, py = a.x1 + t * adx, a.y1 + t * ady
            if (_point_segment_dist(px, py, a) <= radius
                    and _point_segment_dist(px, py, b) <= radius):
                points.append((px, py))
    if not points:
        return []

    # single-linkage clustering via union-find
    parent = list(range(len(points)))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    arr = np.array(points)
    for i in range(len(points) - 1):
        close = np.hypot(arr[i + 1:, 0] - arr[i, 0], arr[i + 1:, 1] - arr[i, 1]) <= radius
        for j in np.nonzero(close)[0] + i + 1:
            ri, rj = find(i), find(int(j))
            if ri != rj:
                parent[rj] = ri
    clusters = {}
    for k in range(len(points)):
        clusters.setdefault(find(k), []).append(points[k])
    centroids = [(float(np.mean([p[0] for p in c])), float(np.mean([p[1] for p in c])))
                 for c in clusters.values()]
    return sorted(centroids, key=lambda p: (p[1], p[0]))


def _input_mask(img, cfg):
    img = as_gray(img)
    if cfg.invert_input:
        img = (255 - img.astype(np.int16)).astype(np.uint8)
    return threshold_binary(img, cfg.threshold)


def stage_segments(img, cfg):
    """Per-stage (label, segments) pairs: raw skeleton plus each erosion step."""
    skel_se = se_from_spec(cfg.skeleton_se)
    mask = _input_mask(img, cfg)
    stages = [("skeleton", hough_segments(skeletonize(mask, skel_se), cfg.hough))]
    worked = dilate(mask, se_from_spec(cfg.dilate_se))
    erode_se = se_from_spec(cfg.erode_se)
    for k in range(1, cfg.erosion_steps + 1):
        worked = erode(worked, erode_se)
        stages.append((f"erosion-{k}", hough_segments(skeletonize(worked, skel_se), cfg.hough)))
    return stages


def detect_edges(img, cfg=None):
    """Run the full composite detector and report segments and nodes."""
    cfg = cfg or PipelineConfig()
    img = as_gray(img)
    h, w = img.shape
    stages = stage_segments(img, cfg)
    segments = merge_segments([segs for _, segs in stages], cfg.merge_dist, cfg.merge_angle)
    nodes = [(min(max(x, 0.0), w - 1.0), min(max(y, 0.0), h - 1.0))
             for x, y in extract_nodes(segments, cfg.node_radius)]
    return DetectionReport(
        segments=segments,
        nodes=nodes,
        per_stage=[{"label": label, "segments": len(segs)} for label, segs in stages],
        config_echo=cfg.to_dict(),
    )


def compare_methods(img, cfg=None):
    """Segment counts for each preprocessing variant of the study sequence.

    Returns (variant, mask, segment_list) rows in a fixed order; the raw
    route runs the edge detector implicitly, so its numbers coincide with
    the explicit canny variant.
    """
    cfg = cfg or PipelineConfig()
    img = as_gray(img)
    skel_se = se_from_spec(cfg.skeleton_se)
    dil_se = se_from_spec(cfg.dilate_se)
    ero_se = se_from_spec(cfg.erode_se)
    static = _input_mask(img, cfg)
    otsu = binarize_otsu(img)
    edges = canny(img)

    rows = [("raw-canny", edges), ("static-threshold", static), ("otsu", otsu), ("canny", edges)]
    d = dilate(static, dil_se)
    rows.append(("dilate-1", d))
    rows.append(("dilate-2", dilate(d, dil_se)))
    ero = otsu
    for k in range(1, 4):
        ero = erode(ero, ero_se)
        rows.append((f"otsu-erode-{k}", ero))
    rows.append(("skeleton-raw", skeletonize(threshold_binary(img, 0), skel_se)))
    rows.append(("skeleton-static", skeletonize(static, skel_se)))

    return [(label, mask, hough_segments(mask, cfg.hough)) for label, mask in rows]
