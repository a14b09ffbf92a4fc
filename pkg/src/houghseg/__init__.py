"""Text line and word segmentation with Hough-transform guided grouping."""
from .binarize import binarize, histogram, otsu_threshold
from .ccl import BoundingBox, Component, bounding_box, label_components
from .edges import edge_map, sobel_gradient
from .eval import GroundTruth, LayoutSpec, generate_page, match_and_score
from .hough import LINE_PARAMS, WORD_PARAMS, HoughParams, accept_lines, synthesize_hough_image, vote
from .imaging import estimate_skew, load_image, rotate, save_image, to_gray
from .pipeline import (PROFILES, DomainProfile, PlateFilterConfig, SegmentationResult, SegmentBox,
                       plate_filter, run_pipeline, segment_lines, segment_words)

__version__ = "0.1.0"
