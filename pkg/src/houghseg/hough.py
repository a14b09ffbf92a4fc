"""(rho, theta) Hough voting and the bridged "Hough image".

A foreground pixel at column ``x`` and row ``y`` votes, for every sampled
normal angle ``theta``, into the cell ``rho = round(x cos(theta) + y
sin(theta))``.  Rounding is half away from zero and the rho bin is one pixel
wide.  Cells with at least ``min_votes`` votes are accepted as lines.  The
Hough image keeps every pixel supporting an accepted line and joins
consecutive supporters of a line when they lie within ``connect_gap``
pixels of each other along the line direction ``(-sin(theta), cos(theta))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .imaging import as_binary

__all__ = [
    "HoughParams",
    "HoughAccumulator",
    "DetectedLine",
    "LINE_PARAMS",
    "WORD_PARAMS",
    "round_half_away",
    "vote",
    "accept_lines",
    "synthesize_hough_image",
    "hough_image",
    "rasterize_segments",
]

# tolerance on the along-line gap test, absorbs cos(90 deg) != 0 and friends
_GAP_EPS = 1e-9
# pixels processed per vectorised block while voting
_CHUNK = 1 << 15


@dataclass(frozen=True)
class HoughParams:
    """Angle window (degrees), angle step, bridging gap and vote threshold."""

    theta_start: float
    theta_end: float
    delta_theta: float
    connect_gap: float
    min_votes: int

    def __post_init__(self):
        if not 0 <= self.theta_start <= self.theta_end <= 180:
            raise ValueError("need 0 <= theta_start <= theta_end <= 180")
        if self.delta_theta <= 0:
            raise ValueError("delta_theta must be positive")
        if self.connect_gap < 0:
            raise ValueError("connect_gap must be non-negative")
        if self.min_votes < 1:
            raise ValueError("min_votes must be at least 1")

    @property
    def n_theta(self) -> int:
        return int(math.floor((self.theta_end - self.theta_start) / self.delta_theta + 1e-9)) + 1

    @property
    def thetas(self) -> np.ndarray:
        return np.array([self.theta_start + k * self.delta_theta for k in range(self.n_theta)])

    def trig(self) -> tuple[np.ndarray, np.ndarray]:
        rad = [math.radians(t) for t in self.thetas]
        return np.array([math.cos(r) for r in rad]), np.array([math.sin(r) for r in rad])


LINE_PARAMS = HoughParams(85.0, 95.0, 1.0, connect_gap=50, min_votes=30)
WORD_PARAMS = HoughParams(30.0, 120.0, 1.0, connect_gap=20, min_votes=2)


def rho_offset(shape: tuple[int, int]) -> int:
    """Ceiling of the image diagonal; rho index = rho + offset."""
    h, w = shape
    d2 = w * w + h * h
    root = math.isqrt(d2)
    return root if root * root == d2 else root + 1


@dataclass
class HoughAccumulator:
    votes: np.ndarray  # (n_rho, n_theta)
    thetas: np.ndarray
    rho_offset: int
    shape: tuple[int, int]

    @property
    def n_theta(self) -> int:
        return self.votes.shape[1]

    @property
    def n_rho(self) -> int:
        return self.votes.shape[0]

    def to_gray(self) -> np.ndarray:
        """Votes scaled linearly so the strongest cell is 255."""
        peak = int(self.votes.max()) if self.votes.size else 0
        if peak == 0:
            return np.zeros(self.votes.shape, dtype=np.uint8)
        return np.floor(self.votes * (255.0 / peak) + 0.5).astype(np.uint8)


@dataclass
class DetectedLine:
    rho: int
    theta: float
    votes: int
    supporters: np.ndarray = field(repr=False)  # (votes, 2) of (row, col)


def round_half_away(values) -> np.ndarray:
    """Round to the nearest integer, halves away from zero.

    ``v - trunc(v)`` is exact in floating point, unlike ``floor(v + 0.5)``.
    """
    v = np.asarray(values, dtype=float)
    whole = np.trunc(v)
    bump = np.abs(v - whole) >= 0.5
    return (whole + np.where(bump, np.sign(v), 0.0)).astype(np.int64)


def _pixels(binary: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = np.nonzero(binary)
    return rows.astype(np.int64), cols.astype(np.int64)


def vote(binary, params: HoughParams) -> HoughAccumulator:
    """Accumulate one vote per foreground pixel per sampled angle."""
    binary = as_binary(binary)
    offset = rho_offset(binary.shape)
    n_rho = 2 * offset + 1
    cos_t, sin_t = params.trig()
    n_theta = len(cos_t)
    flat = np.zeros(n_rho * n_theta, dtype=np.int64)

    rows, cols = _pixels(binary)
    k = np.arange(n_theta)
    for start in range(0, len(rows), _CHUNK):
        x = cols[start:start + _CHUNK, None].astype(float)
        y = rows[start:start + _CHUNK, None].astype(float)
        rho = round_half_away(x * cos_t + y * sin_t)
        flat += np.bincount(((rho + offset) * n_theta + k).ravel(), minlength=flat.size)

    return HoughAccumulator(flat.reshape(n_rho, n_theta), params.thetas, offset, binary.shape)


def accept_lines(acc: HoughAccumulator, params: HoughParams, binary) -> list[DetectedLine]:
    """Every cell with ``votes >= min_votes``, with the pixels that voted for it.

    Sorted by descending votes, then ascending rho, then ascending theta.
    """
    binary = as_binary(binary)
    cells = np.argwhere(acc.votes >= params.min_votes)
    if len(cells) == 0:
        return []
    rows, cols = _pixels(binary)
    cos_t, sin_t = params.trig()

    lines = []
    for k in np.unique(cells[:, 1]):
        rho = round_half_away(cols * cos_t[k] + rows * sin_t[k])
        order = np.argsort(rho, kind="stable")
        sorted_rho = rho[order]
        for rho_idx in cells[cells[:, 1] == k, 0]:
            value = int(rho_idx) - acc.rho_offset
            lo, hi = np.searchsorted(sorted_rho, [value, value + 1])
            members = order[lo:hi]
            supporters = np.column_stack([rows[members], cols[members]])
            lines.append(DetectedLine(value, float(acc.thetas[k]), int(acc.votes[rho_idx, k]), supporters))

    lines.sort(key=lambda ln: (-ln.votes, ln.rho, ln.theta))
    return lines


def rasterize_segments(r0, c0, r1, c1) -> tuple[np.ndarray, np.ndarray]:
    """Pixels on straight segments between integer endpoints (endpoints included).

    Step ``i`` of ``n = max(|dr|, |dc|)`` lands on ``start + round(i * d / n)``
    along each axis, with halves rounded up; integer arithmetic only.
    """
    r0, c0, r1, c1 = (np.asarray(a, dtype=np.int64).ravel() for a in (r0, c0, r1, c1))
    dr, dc = r1 - r0, c1 - c0
    n = np.maximum(np.abs(dr), np.abs(dc))
    steps = n + 1
    seg = np.repeat(np.arange(len(n)), steps)
    first = np.cumsum(steps) - steps
    i = np.arange(seg.size) - np.repeat(first, steps)
    denom = np.maximum(2 * n[seg], 1)
    rr = r0[seg] + (2 * i * dr[seg] + n[seg]) // denom
    cc = c0[seg] + (2 * i * dc[seg] + n[seg]) // denom
    return rr, cc


def _bridge_pairs(t: np.ndarray, same_line: np.ndarray, gap: float) -> np.ndarray:
    """Indices ``j`` (into a sorted run) such that supporters j, j+1 are bridged."""
    return np.flatnonzero(same_line & (np.diff(t) <= gap + _GAP_EPS))


def synthesize_hough_image(binary, lines: list[DetectedLine], params: HoughParams) -> np.ndarray:
    """Supporters of the accepted lines plus the bridges between them.

    Foreground of ``binary`` that supports no accepted line is dropped.
    """
    binary = as_binary(binary)
    out = np.zeros(binary.shape, dtype=bool)
    seg_r0, seg_c0, seg_r1, seg_c1 = [], [], [], []
    for line in lines:
        rows, cols = line.supporters[:, 0], line.supporters[:, 1]
        theta = math.radians(line.theta)
        t = -cols * math.sin(theta) + rows * math.cos(theta)
        order = np.lexsort((cols, rows, t))
        rows, cols, t = rows[order], cols[order], t[order]
        out[rows, cols] = True
        j = _bridge_pairs(t, np.ones(max(len(t) - 1, 0), dtype=bool), params.connect_gap)
        seg_r0.append(rows[j]); seg_c0.append(cols[j])
        seg_r1.append(rows[j + 1]); seg_c1.append(cols[j + 1])
    if seg_r0:
        rr, cc = rasterize_segments(*(np.concatenate(s) for s in (seg_r0, seg_c0, seg_r1, seg_c1)))
        out[rr, cc] = True
    return out


def hough_image(binary, params: HoughParams) -> np.ndarray:
    """Same result as ``synthesize_hough_image(binary, accept_lines(vote(...)))``.

    Works one angle at a time without materialising per-line objects, which
    matters for the word profile where almost every cell clears two votes.
    """
    binary = as_binary(binary)
    out = np.zeros(binary.shape, dtype=bool)
    rows, cols = _pixels(binary)
    if len(rows) == 0:
        return out
    offset = rho_offset(binary.shape)
    cos_t, sin_t = params.trig()
    x = cols.astype(float)
    y = rows.astype(float)
    n_pix = len(rows)

    keys = []
    for c, s in zip(cos_t, sin_t):
        rho = round_half_away(x * c + y * s)
        counts = np.bincount(rho + offset)
        keep = np.flatnonzero(counts[rho + offset] >= params.min_votes)
        if len(keep) == 0:
            continue
        out[rows[keep], cols[keep]] = True
        t = -x[keep] * s + y[keep] * c
        order = keep[np.lexsort((cols[keep], rows[keep], t, rho[keep]))]
        t_sorted = -x[order] * s + y[order] * c
        rho_sorted = rho[order]
        j = _bridge_pairs(t_sorted, rho_sorted[1:] == rho_sorted[:-1], params.connect_gap)
        a, b = order[j], order[j + 1]
        # neighbours are already both set; only longer hops need drawing
        far = np.maximum(np.abs(rows[a] - rows[b]), np.abs(cols[a] - cols[b])) >= 2
        keys.append(a[far] * n_pix + b[far])

    if keys:
        pairs = np.unique(np.concatenate(keys))
        a, b = pairs // n_pix, pairs % n_pix
        for lo in range(0, len(pairs), _CHUNK):
            sl = slice(lo, lo + _CHUNK)
            rr, cc = rasterize_segments(rows[a[sl]], cols[a[sl]], rows[b[sl]], cols[b[sl]])
            out[rr, cc] = True
    return out
