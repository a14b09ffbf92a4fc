"""Synthetic pages with exact ground truth, and segmentation scoring.

Scoring follows the correct / over-segmented / under-segmented split, plus
``missed`` (no prediction overlaps a ground-truth box) and ``spurious``
(a prediction overlaps no ground-truth box).  A prediction *overlaps* a
ground-truth box when their IoU reaches the threshold or when it covers at
least half of the ground-truth area.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .ccl import BoundingBox
from .imaging import gray_to_color, rotate, rotate_points

__all__ = [
    "LayoutSpec",
    "LayoutOverflowError",
    "GroundTruth",
    "KindCounts",
    "EvalReport",
    "generate_page",
    "generate_lpr_frame",
    "iou",
    "score_boxes",
    "match_and_score",
    "summarize",
    "report_table",
    "report_records",
]


class LayoutOverflowError(ValueError):
    """The requested layout does not fit on the canvas."""


@dataclass(frozen=True)
class LayoutSpec:
    """Geometry of a synthetic page of rectangular "character" blobs.

    Ranges are inclusive ``(low, high)`` pairs sampled per character or per
    word.  ``gap_overrides`` holds ``(line, word, gap)`` triples replacing the
    gap that follows ``word`` in ``line``.
    """

    n_lines: int = 10
    words_per_line: int = 8
    chars_per_word: tuple[int, int] = (3, 5)
    char_width: tuple[int, int] = (5, 8)
    char_height: tuple[int, int] = (9, 12)
    intra_word_gap: int = 4
    inter_word_gap: int = 28
    inter_line_gap: int = 20
    margin: int = 24
    noise_prob: float = 0.0
    skew_deg: float = 0.0
    seed: int = 0
    canvas: tuple[int, int] | None = None  # (height, width)
    gap_overrides: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        for name in ("n_lines", "words_per_line", "intra_word_gap", "inter_word_gap", "inter_line_gap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("chars_per_word", "char_width", "char_height"):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise ValueError(f"{name} must be a range with 1 <= low <= high")
        if self.margin < 0:
            raise ValueError("margin must be non-negative")
        if not 0 <= self.noise_prob <= 1:
            raise ValueError("noise_prob must lie in [0, 1]")
        if abs(self.skew_deg) > 45:
            raise ValueError("skew_deg must satisfy |skew| <= 45")


@dataclass
class GroundTruth:
    image_id: str
    lines: list[BoundingBox]
    words: list[tuple[BoundingBox, int]]  # (box, parent line index)


def _hull(boxes) -> BoundingBox:
    arr = np.array(boxes)
    return BoundingBox(int(arr[:, 0].min()), int(arr[:, 1].min()), int(arr[:, 2].max()), int(arr[:, 3].max()))


def _rotate_box(box: BoundingBox, shape, angle, out_shape) -> BoundingBox:
    rows = [box.row_start - 0.5, box.row_start - 0.5, box.row_end + 0.5, box.row_end + 0.5]
    cols = [box.col_start - 0.5, box.col_end + 0.5, box.col_start - 0.5, box.col_end + 0.5]
    rr, cc = rotate_points(rows, cols, shape, angle)
    h, w = out_shape
    return BoundingBox(max(0, int(math.floor(rr.min() + 0.5))), max(0, int(math.floor(cc.min() + 0.5))),
                       min(h - 1, int(math.ceil(rr.max() - 0.5))), min(w - 1, int(math.ceil(cc.max() - 0.5))))


def add_salt_pepper(gray: np.ndarray, prob: float, rng: np.random.Generator) -> np.ndarray:
    """Replace each pixel with probability ``prob`` by black or white (equally likely)."""
    out = gray.copy()
    hit = rng.random(gray.shape) < prob
    white = rng.random(gray.shape) < 0.5
    out[hit & white] = 255
    out[hit & ~white] = 0
    return out


def generate_page(spec: LayoutSpec, image_id: str | None = None) -> tuple[np.ndarray, GroundTruth]:
    """Render black blobs on white grouped into words and lines.

    Characters in a line share a baseline.  Returns the RGB image and the
    line and word boxes; with skew the boxes become the axis-aligned hulls
    of the rotated boxes.
    """
    rng = np.random.default_rng(spec.seed)
    overrides = {(ln, wd): gap for ln, wd, gap in spec.gap_overrides}

    # layout first, in coordinates relative to the margin
    layout = []  # per line: list of words, each a list of (dx, width, height)
    line_heights, line_widths = [], []
    for ln in range(spec.n_lines):
        words, x = [], 0
        for wd in range(spec.words_per_line):
            n_chars = int(rng.integers(spec.chars_per_word[0], spec.chars_per_word[1] + 1))
            chars = []
            for ch in range(n_chars):
                cw = int(rng.integers(spec.char_width[0], spec.char_width[1] + 1))
                chh = int(rng.integers(spec.char_height[0], spec.char_height[1] + 1))
                chars.append((x, cw, chh))
                x += cw + (spec.intra_word_gap if ch < n_chars - 1 else 0)
            words.append(chars)
            if wd < spec.words_per_line - 1:
                x += overrides.get((ln, wd), spec.inter_word_gap)
        layout.append(words)
        line_widths.append(x)
        line_heights.append(max(c[2] for word in words for c in word))

    content_h = sum(line_heights) + spec.inter_line_gap * (spec.n_lines - 1)
    content_w = max(line_widths)
    need = (content_h + 2 * spec.margin, content_w + 2 * spec.margin)
    height, width = spec.canvas if spec.canvas is not None else need
    if need[0] > height or need[1] > width:
        raise LayoutOverflowError(f"layout needs {need[0]}x{need[1]} pixels, canvas is {height}x{width}")

    gray = np.full((height, width), 255, dtype=np.uint8)
    lines, words_gt = [], []
    top = spec.margin
    for ln, words in enumerate(layout):
        baseline = top + line_heights[ln] - 1
        word_boxes = []
        for chars in words:
            blobs = []
            for dx, cw, chh in chars:
                box = BoundingBox(baseline - chh + 1, spec.margin + dx, baseline, spec.margin + dx + cw - 1)
                gray[box.row_start:box.row_end + 1, box.col_start:box.col_end + 1] = 0
                blobs.append(box)
            word_boxes.append(_hull(blobs))
        lines.append(_hull(word_boxes))
        words_gt.extend((b, ln) for b in word_boxes)
        top += line_heights[ln] + spec.inter_line_gap

    if spec.skew_deg:
        shape = gray.shape
        gray = rotate(gray, spec.skew_deg)
        lines = [_rotate_box(b, shape, spec.skew_deg, gray.shape) for b in lines]
        words_gt = [(_rotate_box(b, shape, spec.skew_deg, gray.shape), p) for b, p in words_gt]
    if spec.noise_prob > 0:
        gray = add_salt_pepper(gray, spec.noise_prob, rng)

    image_id = image_id if image_id is not None else f"page-{spec.seed:04d}"
    return gray_to_color(gray), GroundTruth(image_id, lines, words_gt)


def draw_glyph(gray: np.ndarray, box: BoundingBox, stroke: int) -> None:
    """Stroked character: rectangular outline plus a middle bar, like an "8".

    Falls back to a solid blob when the box is too small for hollow strokes.
    """
    r0, c0, r1, c1 = box
    if box.height < 3 * stroke + 2 or box.width < 2 * stroke + 2:
        gray[r0:r1 + 1, c0:c1 + 1] = 0
        return
    gray[r0:r0 + stroke, c0:c1 + 1] = 0
    gray[r1 - stroke + 1:r1 + 1, c0:c1 + 1] = 0
    gray[r0:r1 + 1, c0:c0 + stroke] = 0
    gray[r0:r1 + 1, c1 - stroke + 1:c1 + 1] = 0
    mid = (r0 + r1) // 2 - stroke // 2
    gray[mid:mid + stroke, c0:c1 + 1] = 0


def generate_lpr_frame(seed: int, shape: tuple[int, int] = (480, 640),
                       image_id: str | None = None) -> tuple[np.ndarray, GroundTruth, int]:
    """A street-scene stand-in: one plate plus several non-plate text blocks.

    The blocks are a plate (aspect 2.5-5, about 1% of the frame), a poster
    of a few huge near-square glyphs, a row of tiny caption words and a long
    thin banner.  Each block is one ground-truth line; every word of it is a
    ground-truth word.  Returns the image, the ground truth and the index of
    the plate among the words.
    """
    rng = np.random.default_rng(seed)
    height, width = shape
    gray = np.full(shape, 255, dtype=np.uint8)
    occupied = np.zeros(shape, dtype=bool)
    lines: list[BoundingBox] = []
    words: list[tuple[BoundingBox, int]] = []

    def place(block_h, block_w, pad=30):
        for _ in range(500):
            top = int(rng.integers(pad, height - block_h - pad))
            left = int(rng.integers(pad, width - block_w - pad))
            region = occupied[max(0, top - pad):top + block_h + pad, max(0, left - pad):left + block_w + pad]
            if not region.any():
                occupied[top:top + block_h, left:left + block_w] = True
                return top, left
        raise LayoutOverflowError("could not place block without overlap")

    def block(word_specs, ch, stroke, word_gap=0):
        # word_specs: list of (n_chars, char_width, char_gap)
        spans = [n * cw + (n - 1) * gap for n, cw, gap in word_specs]
        top, left = place(ch, sum(spans) + word_gap * (len(spans) - 1))
        hulls = []
        for (n, cw, gap), span in zip(word_specs, spans):
            glyphs = []
            for i in range(n):
                c0 = left + i * (cw + gap)
                glyphs.append(BoundingBox(top, c0, top + ch - 1, c0 + cw - 1))
                draw_glyph(gray, glyphs[-1], stroke)
            hulls.append(_hull(glyphs))
            left += span + word_gap
        line_index = len(lines)
        lines.append(_hull(hulls))
        words.extend((h, line_index) for h in hulls)

    n = int(rng.integers(5, 8))
    block([(n, int(rng.integers(11, 15)), 6)], ch=int(rng.integers(26, 33)), stroke=3)
    plate_index = 0

    n = int(rng.integers(4, 6))
    block([(n, int(rng.integers(30, 37)), 10)], ch=int(rng.integers(120, 151)), stroke=4)

    n_words = int(rng.integers(2, 4))
    block([(3, 4, 3)] * n_words, ch=8, stroke=8, word_gap=30)

    n = int(rng.integers(18, 24))
    block([(n, 9, 5)], ch=14, stroke=2)

    image_id = image_id if image_id is not None else f"frame-{seed:04d}"
    return gray_to_color(gray), GroundTruth(image_id, lines, words), plate_index


# --------------------------------------------------------------------------
# scoring

def iou(a: BoundingBox, b: BoundingBox) -> float:
    inter = _intersection(a, b)
    return inter / (a.area + b.area - inter) if inter else 0.0


def _intersection(a: BoundingBox, b: BoundingBox) -> int:
    dh = min(a.row_end, b.row_end) - max(a.row_start, b.row_start) + 1
    dw = min(a.col_end, b.col_end) - max(a.col_start, b.col_start) + 1
    return dh * dw if dh > 0 and dw > 0 else 0


@dataclass
class KindCounts:
    total: int = 0
    correct: int = 0
    over_segmented: int = 0
    under_segmented: int = 0
    missed: int = 0
    spurious: int = 0

    def percent(self, category: str) -> float:
        return 100.0 * getattr(self, category) / self.total if self.total else 0.0

    def __add__(self, other: "KindCounts") -> "KindCounts":
        return KindCounts(*(getattr(self, f) + getattr(other, f) for f in self.__dataclass_fields__))


_CATEGORIES = ("correct", "over_segmented", "under_segmented", "missed")


@dataclass
class EvalReport:
    image_id: str
    lines: KindCounts = field(default_factory=KindCounts)
    words: KindCounts = field(default_factory=KindCounts)


def _overlaps(pred: BoundingBox, gt: BoundingBox, threshold: float) -> bool:
    inter = _intersection(pred, gt)
    if not inter:
        return False
    # integer test for "covers at least half of the ground truth"
    return 2 * inter >= gt.area or inter / (pred.area + gt.area - inter) >= threshold


def score_boxes(predicted, truth, iou_threshold: float = 0.5) -> KindCounts:
    """Categorise each ground-truth box against a set of predicted boxes."""
    if not 0 < iou_threshold <= 1:
        raise ValueError("iou_threshold must lie in (0, 1]")
    predicted = [BoundingBox(*p) for p in predicted]
    truth = [BoundingBox(*t) for t in truth]
    hits = [[j for j, p in enumerate(predicted) if _overlaps(p, g, iou_threshold)] for g in truth]
    pred_hits = [0] * len(predicted)
    for matched in hits:
        for j in matched:
            pred_hits[j] += 1

    counts = KindCounts(total=len(truth))
    for matched in hits:
        if len(matched) >= 2:
            counts.over_segmented += 1
        elif len(matched) == 1:
            if pred_hits[matched[0]] > 1:
                counts.under_segmented += 1
            else:
                counts.correct += 1
        else:
            counts.missed += 1
    counts.spurious = sum(1 for n in pred_hits if n == 0)
    return counts


def _box(item) -> BoundingBox:
    if hasattr(item, "box"):
        return item.box
    if len(item) == 2:  # (box, parent)
        return BoundingBox(*item[0])
    return BoundingBox(*item)


def match_and_score(predicted, truth: GroundTruth, iou_threshold: float = 0.5) -> EvalReport:
    """Score predictions against ground truth for one image.

    ``predicted`` is a :class:`~houghseg.pipeline.SegmentationResult` or
    anything else with ``image_id``, ``lines`` and ``words``, such as a
    :class:`GroundTruth` read back from a box file.
    """
    if predicted.image_id != truth.image_id:
        raise ValueError(f"image id mismatch: prediction {predicted.image_id!r} vs truth {truth.image_id!r}")
    return EvalReport(
        truth.image_id,
        score_boxes([_box(s) for s in predicted.lines], truth.lines, iou_threshold),
        score_boxes([_box(s) for s in predicted.words], [b for b, _ in truth.words], iou_threshold),
    )


def summarize(reports) -> EvalReport:
    total = EvalReport("__summary__")
    for r in reports:
        total.lines = total.lines + r.lines
        total.words = total.words + r.words
    return total


def report_table(reports) -> str:
    """Fixed-width text table, one row per image and kind, then the totals."""
    reports = list(reports)
    header = f"{'image':<20} {'kind':<5} {'gt':>6} {'correct':>9} {'over':>9} {'under':>9} {'missed':>9} {'spurious':>8}"
    rows = [header, "-" * len(header)]
    for r in reports + [summarize(reports)]:
        for kind in ("lines", "words"):
            c = getattr(r, kind)
            cells = " ".join(f"{c.percent(cat):>8.1f}%" for cat in _CATEGORIES)
            rows.append(f"{r.image_id:<20} {kind[:-1]:<5} {c.total:>6} {cells} {c.spurious:>8}")
    return "\n".join(rows) + "\n"


def _record(report: EvalReport) -> dict:
    rec = {"image_id": report.image_id}
    for kind in ("lines", "words"):
        c = getattr(report, kind)
        rec[kind] = asdict(c) | {f"{cat}_pct": round(c.percent(cat), 4) for cat in _CATEGORIES}
    return rec


def report_records(reports) -> str:
    """JSON Lines: one object per image, then one with ``image_id == "__summary__"``."""
    reports = list(reports)
    out = [json.dumps(_record(r), sort_keys=True) for r in reports]
    out.append(json.dumps(_record(summarize(reports)), sort_keys=True))
    return "\n".join(out) + "\n"
