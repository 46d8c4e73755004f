"""Estimator-style wrapper so the detector plugs into sklearn tooling."""

import math

from sklearn.base import BaseEstimator

from .hough import HoughParams
from .pipeline import PipelineConfig, detect_edges
from .raster import as_gray


class HoneycombEdgeDetector(BaseEstimator):
    """Configurable wall-segment and node detector for honeycomb photographs.

    The detector is stateless: ``fit`` only validates the parameters and
    freezes them into ``config_``. ``predict`` accepts a single 2-D grayscale
    image (uint8-compatible) and returns a DetectionReport; a list or tuple
    of images returns a list of reports. All constructor arguments follow
    sklearn conventions, so ``get_params``/``set_params``/``clone`` work.
    """

    def __init__(self, threshold=128, invert_input=False, dilate_se="square:5",
                 erode_se="square:3", skeleton_se="cross:3", erosion_steps=2,
                 rho_res=0.75, theta_res=math.pi / 180.0, votes_min=16,
                 min_len=19.0, max_gap=1.0, peak_window=7,
                 merge_dist=3.0, merge_angle=math.radians(3.0), node_radius=5.0):
        self.threshold = threshold
        self.invert_input = invert_input
        self.dilate_se = dilate_se
        self.erode_se = erode_se
        self.skeleton_se = skeleton_se
        self.erosion_steps = erosion_steps
        self.rho_res = rho_res
        self.theta_res = theta_res
        self.votes_min = votes_min
        self.min_len = min_len
        self.max_gap = max_gap
        self.peak_window = peak_window
        self.merge_dist = merge_dist
        self.merge_angle = merge_angle
        self.node_radius = node_radius

    def _config(self):
        return PipelineConfig(
            threshold=self.threshold,
            invert_input=self.invert_input,
            dilate_se=self.dilate_se,
            erode_se=self.erode_se,
            skeleton_se=self.skeleton_se,
            erosion_steps=self.erosion_steps,
            hough=HoughParams(
                rho_res=self.rho_res,
                theta_res=self.theta_res,
                votes_min=self.votes_min,
                min_len=self.min_len,
                max_gap=self.max_gap,
                peak_window=self.peak_window,
            ),
            merge_dist=self.merge_dist,
            merge_angle=self.merge_angle,
            node_radius=self.node_radius,
        )

    def fit(self, X=None, y=None):
        """Validate parameters; no data-dependent state is learned."""
        self.config_ = self._config()
        return self

    def predict(self, X):
        """Detect edges in one image or in a sequence of images."""
        if not hasattr(self, "config_"):
            self.fit()
        if isinstance(X, (list, tuple)):
            return [detect_edges(as_gray(img), self.config_) for img in X]
        return detect_edges(as_gray(X), self.config_)

    def transform(self, X):
        return self.predict(X)
