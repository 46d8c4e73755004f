"""Recall/precision of detected segments against ground-truth cell graphs."""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MatchResult:
    recall: float
    precision: float
    matched: list                 # (gt_edge_index, segment_index) pairs
    unmatched_gt: list
    unmatched_detected: list

    def to_json_dict(self):
        return {
            "recall": self.recall,
            "precision": self.precision,
            "matched": [[int(g), int(s)] for g, s in self.matched],
            "unmatched_gt": [int(i) for i in self.unmatched_gt],
            "unmatched_detected": [int(i) for i in self.unmatched_detected],
        }


def _angle_diff(a, b):
    d = abs(a - b) % math.pi
    return min(d, math.pi - d)


def _matches(edge_p, edge_q, seg, dist_tol, angle_tol, coverage_min):
    ex, ey = edge_q[0] - edge_p[0], edge_q[1] - edge_p[1]
    elen = math.hypot(ex, ey)
    if elen == 0:
        return False
    sx, sy = seg.x2 - seg.x1, seg.y2 - seg.y1
    slen = math.hypot(sx, sy)
    if slen == 0:
        return False
    if _angle_diff(math.atan2(ey, ex), math.atan2(sy, sx)) > angle_tol:
        return False

    # projection of the segment onto the edge axis, clipped to the edge
    ux, uy = ex / elen, ey / elen
    t1 = (seg.x1 - edge_p[0]) * ux + (seg.y1 - edge_p[1]) * uy
    t2 = (seg.x2 - edge_p[0]) * ux + (seg.y2 - edge_p[1]) * uy
    lo, hi = max(0.0, min(t1, t2)), min(elen, max(t1, t2))
    if hi - lo < coverage_min * elen:
        return False

    # every ~1 px sample of the overlapping part of the edge must hug the
    # segment's supporting line
    nx, ny = -sy / slen, sx / slen
    n_samples = max(2, int(math.ceil(hi - lo)) + 1)
    ts = np.linspace(lo, hi, n_samples)
    px = edge_p[0] + ts * ux
    py = edge_p[1] + ts * uy
    dist = np.abs((px - seg.x1) * nx + (py - seg.y1) * ny)
    return bool((dist <= dist_tol).all())


def match_segments(detected, truth, dist_tol=3.0, angle_tol=math.radians(5.0),
                   coverage_min=0.6):
    """Many-to-many matching of detected segments to ground-truth edges.

    A pair matches when directions agree within angle_tol, the segment covers
    at least coverage_min of the edge's length in projection, and the covered
    portion of the edge stays within dist_tol of the segment's line. Recall
    and precision count distinct matched items on each side.
    """
    if dist_tol <= 0 or angle_tol <= 0 or not 0 < coverage_min <= 1:
        raise ValueError("tolerances must be positive and coverage_min in (0, 1]")
    matched = []
    gt_hit = set()
    seg_hit = set()
    for g, (i, j) in enumerate(truth.edges):
        p, q = truth.nodes[i], truth.nodes[j]
        for s, seg in enumerate(detected):
            if _matches(p, q, seg, dist_tol, angle_tol, coverage_min):
                matched.append((g, s))
                gt_hit.add(g)
                seg_hit.add(s)
    n_gt, n_seg = len(truth.edges), len(detected)
    return MatchResult(
        recall=len(gt_hit) / n_gt if n_gt else 1.0,
        precision=len(seg_hit) / n_seg if n_seg else 1.0,
        matched=matched,
        unmatched_gt=[g for g in range(n_gt) if g not in gt_hit],
        unmatched_detected=[s for s in range(n_seg) if s not in seg_hit],
    )


def corpus_report(results):
    """Mean/min/max recall and precision over per-image match results."""
    if not results:
        raise ValueError("corpus_report needs at least one result")
    recalls = [r.recall for r in results]
    precisions = [r.precision for r in results]
    return {
        "images": len(results),
        "recall": {"mean": float(np.mean(recalls)), "min": min(recalls), "max": max(recalls)},
        "precision": {"mean": float(np.mean(precisions)), "min": min(precisions), "max": max(precisions)},
        "rows": [{"recall": r.recall, "precision": r.precision} for r in results],
    }
