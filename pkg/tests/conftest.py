import time

import pytest

from combscan.metrics import match_segments
from combscan.pipeline import PipelineConfig, merge_segments, stage_segments
from combscan.synth import SynthParams, generate

CORPUS_SEEDS = range(1, 21)
CORPUS_PARAMS = dict(cols=12, rows=10, cell_radius=24.0, wall_thickness=3.0,
                     jitter=0.15, noise_sigma=8.0, gradient_strength=20.0,
                     blur_sigma=0.8, wall_intensity=255, background_intensity=0)


@pytest.fixture(scope="session")
def corpus():
    """The canonical 20-image corpus: (image, ground-truth graph) pairs."""
    return [generate(SynthParams(seed=s, **CORPUS_PARAMS)) for s in CORPUS_SEEDS]


@pytest.fixture(scope="session")
def corpus_runs(corpus):
    """Default-config detection on every corpus image, with per-stage
    segment lists, merged output, match result, and wall-clock runtime."""
    cfg = PipelineConfig()
    runs = []
    for img, graph in corpus:
        t0 = time.perf_counter()
        stages = stage_segments(img, cfg)
        merged = merge_segments([segs for _, segs in stages],
                                cfg.merge_dist, cfg.merge_angle)
        runtime = time.perf_counter() - t0
        runs.append({
            "image": img,
            "graph": graph,
            "stages": stages,
            "merged": merged,
            "match": match_segments(merged, graph),
            "runtime": runtime,
            "config": cfg,
        })
    return runs
