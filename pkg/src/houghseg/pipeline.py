"""Line and word segmentation driven by the Hough image.

The flow for one image is: grey conversion, optional denoise and deskew,
Otsu binarisation, Sobel edge map, a line-stage Hough image of the edge map
labelled into text lines, then for every line a word-stage Hough image of the
cropped text binarisation labelled into words.  The ``lpr`` profile finally
keeps only plate-shaped word boxes.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .binarize import binarize
from .ccl import BoundingBox, component_boxes, label_image
from .edges import edge_map
from .hough import LINE_PARAMS, WORD_PARAMS, HoughParams, hough_image, vote
from .imaging import as_binary, estimate_skew, median_denoise, rotate, to_gray

__all__ = [
    "PipelineError",
    "PlateFilterConfig",
    "DomainProfile",
    "SegmentBox",
    "SegmentationResult",
    "PROFILES",
    "DEFAULT_PLATE_FILTER",
    "get_profile",
    "load_profile",
    "dump_profile",
    "segment_lines",
    "segment_words",
    "plate_filter",
    "run_pipeline",
]

# tightened line boxes smaller than this in either direction are noise
MIN_LINE_SIZE = 3


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class PlateFilterConfig:
    """Accepted width/height ratio and share of the frame area for a plate."""

    aspect_min: float = 2.0
    aspect_max: float = 6.0
    rel_area_min: float = 0.001
    rel_area_max: float = 0.05

    def __post_init__(self):
        if not 0 < self.aspect_min < self.aspect_max:
            raise ValueError("need 0 < aspect_min < aspect_max")
        if not 0 < self.rel_area_min < self.rel_area_max <= 1:
            raise ValueError("need 0 < rel_area_min < rel_area_max <= 1")


DEFAULT_PLATE_FILTER = PlateFilterConfig()


@dataclass(frozen=True)
class DomainProfile:
    name: str
    line_params: HoughParams = LINE_PARAMS
    word_params: HoughParams = WORD_PARAMS
    deskew_enabled: bool = False
    invert_polarity: bool = False
    denoise: bool = True
    skip_line_stage: bool = False
    plate_filter: PlateFilterConfig | None = None


PROFILES: dict[str, DomainProfile] = {
    "document": DomainProfile("document"),
    "bcr": DomainProfile("bcr"),
    "lpr": DomainProfile("lpr", plate_filter=DEFAULT_PLATE_FILTER),
}


@dataclass(frozen=True)
class SegmentBox:
    kind: str  # "line" or "word"
    box: BoundingBox
    parent: int | None = None
    source_image_id: str = ""


@dataclass
class SegmentationResult:
    image_id: str
    profile: str
    lines: list[SegmentBox]
    words: list[SegmentBox]
    shape: tuple[int, int]
    artifacts: dict[str, np.ndarray] = field(default_factory=dict, repr=False)


def get_profile(name: str) -> DomainProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}") from None


# --------------------------------------------------------------------------
# profile files: flat "key = value" lines, '#' starts a comment

_PARAM_FIELDS = ("theta_start", "theta_end", "delta_theta", "connect_gap", "min_votes")
_FILTER_FIELDS = ("aspect_min", "aspect_max", "rel_area_min", "rel_area_max")
_FLAG_FIELDS = {"deskew": "deskew_enabled", "invert": "invert_polarity", "denoise": "denoise",
                "skip_line_stage": "skip_line_stage"}


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_profile(text: str, source: str = "<profile>") -> DomainProfile:
    """Build a profile from ``key = value`` text.

    ``profile.name`` picks the built-in profile the other keys override.
    """
    entries: dict[str, tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        entries[key] = (lineno, value)

    name = entries.pop("profile.name", (0, "document"))[1]
    base = get_profile(name)
    line_kw = dataclasses.asdict(base.line_params)
    word_kw = dataclasses.asdict(base.word_params)
    filt = dataclasses.asdict(base.plate_filter) if base.plate_filter else None
    filter_enabled = base.plate_filter is not None
    explicit_enabled = None
    flags = {}

    for key, (lineno, value) in entries.items():
        section, _, item = key.partition(".")
        try:
            if section in ("line", "word") and item in _PARAM_FIELDS:
                target = line_kw if section == "line" else word_kw
                target[item] = int(value) if item == "min_votes" else float(value)
            elif section == "filter" and item == "enabled":
                explicit_enabled = _parse_bool(value)
            elif section == "filter" and item in _FILTER_FIELDS:
                filt = filt or dataclasses.asdict(DEFAULT_PLATE_FILTER)
                filt[item] = float(value)
                filter_enabled = True
            elif section == "profile" and item in _FLAG_FIELDS:
                flags[_FLAG_FIELDS[item]] = _parse_bool(value)
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from None
    if explicit_enabled is not None:
        filter_enabled = explicit_enabled

    try:
        return dataclasses.replace(
            base,
            line_params=HoughParams(**line_kw),
            word_params=HoughParams(**word_kw),
            plate_filter=PlateFilterConfig(**(filt or {})) if filter_enabled else None,
            **flags,
        )
    except ValueError as exc:
        raise ValueError(f"{source}: {exc}") from None


def load_profile(path) -> DomainProfile:
    path = Path(path)
    return parse_profile(path.read_text(), str(path))


def dump_profile(profile: DomainProfile) -> str:
    out = [f"profile.name = {profile.name}"]
    for key, attr in _FLAG_FIELDS.items():
        out.append(f"profile.{key} = {str(getattr(profile, attr)).lower()}")
    for section, params in (("line", profile.line_params), ("word", profile.word_params)):
        for item in _PARAM_FIELDS:
            out.append(f"{section}.{item} = {getattr(params, item)}")
    out.append(f"filter.enabled = {str(profile.plate_filter is not None).lower()}")
    if profile.plate_filter is not None:
        for item in _FILTER_FIELDS:
            out.append(f"filter.{item} = {getattr(profile.plate_filter, item)}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# stages

def _tight_boxes(hough: np.ndarray, tighten_to: np.ndarray) -> list[BoundingBox]:
    labels, count = label_image(hough)
    boxes = component_boxes(labels, count, where=tighten_to)
    return [BoundingBox(*map(int, b)) for b in boxes if b[0] >= 0]


def _line_stage(binary, params, tighten_to):
    hough = hough_image(binary, params)
    boxes = [b for b in _tight_boxes(hough, tighten_to)
             if b.height >= MIN_LINE_SIZE and b.width >= MIN_LINE_SIZE]
    return boxes, hough


def segment_lines(binary, params: HoughParams = LINE_PARAMS, tighten_to=None,
                  image_id: str = "") -> list[SegmentBox]:
    """One line box per component of the line-stage Hough image.

    Boxes are shrunk to the component pixels that are foreground in
    ``tighten_to`` (``binary`` itself by default) so bridge pixels never
    widen a box.
    """
    binary = as_binary(binary)
    tighten_to = binary if tighten_to is None else as_binary(tighten_to)
    boxes, _ = _line_stage(binary, params, tighten_to)
    return [SegmentBox("line", b, None, image_id) for b in boxes]


def _word_stage(binary, box: BoundingBox, params):
    h, w = binary.shape
    if box.row_start < 0 or box.col_start < 0 or box.row_end >= h or box.col_end >= w:
        raise ValueError(f"line box {tuple(box)} lies outside the {h}x{w} image")
    if box.row_end < box.row_start or box.col_end < box.col_start:
        raise ValueError(f"degenerate line box {tuple(box)}")
    crop = binary[box.row_start:box.row_end + 1, box.col_start:box.col_end + 1]
    if not crop.any():
        return [], np.zeros_like(crop)
    hough = hough_image(crop, params)
    boxes = sorted(_tight_boxes(hough, crop), key=lambda b: (b.col_start, b.row_start))
    return [b.shift(box.row_start, box.col_start) for b in boxes], hough


def segment_words(binary, line: SegmentBox | BoundingBox, params: HoughParams = WORD_PARAMS,
                  parent: int | None = None, image_id: str = "") -> list[SegmentBox]:
    """Word boxes inside one line, left to right, in full-image coordinates."""
    box = line.box if isinstance(line, SegmentBox) else BoundingBox(*line)
    if isinstance(line, SegmentBox) and not image_id:
        image_id = line.source_image_id
    boxes, _ = _word_stage(as_binary(binary), box, params)
    return [SegmentBox("word", b, parent, image_id) for b in boxes]


def plate_filter(words: list[SegmentBox], cfg: PlateFilterConfig | None,
                 image_shape: tuple[int, int]) -> list[SegmentBox]:
    """Keep plate-shaped boxes; ``cfg=None`` disables the filter."""
    if cfg is None:
        return list(words)
    frame_area = image_shape[0] * image_shape[1]
    kept = []
    for word in words:
        aspect = word.box.width / word.box.height
        rel_area = word.box.area / frame_area
        if cfg.aspect_min <= aspect <= cfg.aspect_max and cfg.rel_area_min <= rel_area <= cfg.rel_area_max:
            kept.append(word)
    return kept


def _run_stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(name, exc) from exc


def run_pipeline(img, profile: DomainProfile | str = "document", image_id: str = "",
                 debug: bool = False) -> SegmentationResult:
    """Segment a colour image into line and word boxes.

    ``artifacts["binary"]`` always holds the text binarisation; ``debug``
    adds ``gray``, ``edges``, ``accumulator``, ``line_hough`` and
    ``word_hough``.
    """
    if isinstance(profile, str):
        profile = get_profile(profile)

    gray = _run_stage("grey conversion", to_gray, img)
    if profile.denoise:
        gray = _run_stage("denoise", median_denoise, gray)
    if profile.deskew_enabled:
        angle = _run_stage("skew estimation", lambda g: estimate_skew(edge_map(g)), gray)
        gray = _run_stage("rotation", rotate, gray, angle)
    if gray.size and gray.min() == gray.max():
        # no contrast at all: Otsu would call the whole page foreground
        text = np.zeros(gray.shape, dtype=bool)
    else:
        text = _run_stage("binarization", binarize, gray, profile.invert_polarity)
    edges = _run_stage("edge detection", edge_map, gray)

    if profile.skip_line_stage:
        rows, cols = np.nonzero(text)
        line_boxes = [] if len(rows) == 0 else [
            BoundingBox(int(rows.min()), int(cols.min()), int(rows.max()), int(cols.max()))]
        line_hough = np.zeros_like(edges)
    else:
        line_boxes, line_hough = _run_stage("line segmentation", _line_stage, edges,
                                            profile.line_params, text)

    lines = [SegmentBox("line", b, None, image_id) for b in line_boxes]
    words: list[SegmentBox] = []
    word_hough = np.zeros_like(text)
    for index, box in enumerate(line_boxes):
        boxes, crop_hough = _run_stage("word segmentation", _word_stage, text, box, profile.word_params)
        words.extend(SegmentBox("word", b, index, image_id) for b in boxes)
        if debug:
            region = word_hough[box.row_start:box.row_end + 1, box.col_start:box.col_end + 1]
            region |= crop_hough

    if profile.plate_filter is not None:
        words = _run_stage("plate filter", plate_filter, words, profile.plate_filter, text.shape)

    artifacts = {"binary": text}
    if debug:
        artifacts |= {
            "gray": gray,
            "edges": edges,
            "accumulator": vote(edges, profile.line_params).to_gray(),
            "line_hough": line_hough,
            "word_hough": word_hough,
        }
    return SegmentationResult(image_id, profile.name, lines, words, text.shape, artifacts)
