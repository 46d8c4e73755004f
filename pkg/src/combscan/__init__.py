"""Edge and node recovery for honeycomb-block photographs."""

from .binarize import binarize_otsu, histogram, otsu_threshold, threshold_binary
from .canny import GradientField, canny, gaussian_blur, sobel
from .estimator import HoneycombEdgeDetector
from .hough import (Accumulator, HoughParams, PolarLine, Segment, accumulate,
                    extract_segments, find_peaks, hough_segments)
from .metrics import MatchResult, corpus_report, match_segments
from .morphology import (StructuringElement, dilate, erode, opening, reflect,
                         se_cross, se_from_spec, se_square, skeletonize)
from .pipeline import (DetectionReport, PipelineConfig, compare_methods,
                       detect_edges, extract_nodes, merge_segments, stage_segments)
from .raster import (PnmParseError, as_binary, as_gray, bin_and, bin_not,
                     bin_or, bin_sub, binary_to_gray, load_pnm, save_pgm)
from .synth import CellGraph, SynthParams, degrade, generate

__version__ = "0.1.0"
