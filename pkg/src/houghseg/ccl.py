"""4-connected component labelling (two-pass, union-find, no recursion)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .imaging import as_binary

__all__ = ["BoundingBox", "Component", "label_image", "label_components", "bounding_box",
           "component_boxes"]


class BoundingBox(NamedTuple):
    """Inclusive pixel extent."""

    row_start: int
    col_start: int
    row_end: int
    col_end: int

    @property
    def height(self) -> int:
        return self.row_end - self.row_start + 1

    @property
    def width(self) -> int:
        return self.col_end - self.col_start + 1

    @property
    def area(self) -> int:
        return self.height * self.width

    def shift(self, drow: int, dcol: int) -> "BoundingBox":
        return BoundingBox(self.row_start + drow, self.col_start + dcol,
                           self.row_end + drow, self.col_end + dcol)

    def contains(self, other: "BoundingBox") -> bool:
        return (self.row_start <= other.row_start and self.col_start <= other.col_start
                and other.row_end <= self.row_end and other.col_end <= self.col_end)


@dataclass
class Component:
    label: int
    pixel_count: int
    box: BoundingBox
    pixels: np.ndarray | None = None  # (pixel_count, 2) of (row, col)


@njit(cache=True)
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@njit(cache=True)
def _two_pass(mask):
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int64)
    parent = np.zeros(h * w // 2 + 2, dtype=np.int64)
    next_label = 1
    for r in range(h):
        for c in range(w):
            if not mask[r, c]:
                continue
            up = labels[r - 1, c] if r > 0 else 0
            left = labels[r, c - 1] if c > 0 else 0
            if up == 0 and left == 0:
                if next_label >= parent.shape[0]:
                    grown = np.zeros(parent.shape[0] * 2, dtype=np.int64)
                    grown[: parent.shape[0]] = parent
                    parent = grown
                parent[next_label] = next_label
                labels[r, c] = next_label
                next_label += 1
            elif up == 0:
                labels[r, c] = left
            elif left == 0:
                labels[r, c] = up
            else:
                a = _find(parent, up)
                b = _find(parent, left)
                # the smaller provisional label is the earlier one in scan order
                if a < b:
                    parent[b] = a
                    labels[r, c] = a
                else:
                    parent[a] = b
                    labels[r, c] = b

    # roots in increasing order get final labels 1..n
    final = np.zeros(next_label, dtype=np.int64)
    count = 0
    for i in range(1, next_label):
        root = _find(parent, i)
        if root == i:
            count += 1
            final[i] = count
    for i in range(1, next_label):
        final[i] = final[_find(parent, i)]
    for r in range(h):
        for c in range(w):
            if labels[r, c]:
                labels[r, c] = final[labels[r, c]]
    return labels, count


def label_image(binary) -> tuple[np.ndarray, int]:
    """Label array (0 = background) and the number of components.

    Labels run 1..n in the row-major order of each component's first pixel.
    """
    mask = np.ascontiguousarray(as_binary(binary))
    if mask.size == 0:
        return np.zeros(mask.shape, dtype=np.int64), 0
    labels, count = _two_pass(mask)
    return labels, int(count)


def component_boxes(labels: np.ndarray, count: int, where=None) -> np.ndarray:
    """``(count, 4)`` array of inclusive boxes, one row per label.

    With ``where`` given, only pixels where it is True contribute; labels
    left without pixels get a row of -1.
    """
    boxes = np.full((count, 4), -1, dtype=np.int64)
    if count == 0:
        return boxes
    sel = labels > 0 if where is None else (labels > 0) & where
    rows, cols = np.nonzero(sel)
    idx = labels[rows, cols] - 1
    big = np.iinfo(np.int64).max
    lo_r = np.full(count, big); lo_c = np.full(count, big)
    hi_r = np.full(count, -1); hi_c = np.full(count, -1)
    np.minimum.at(lo_r, idx, rows); np.minimum.at(lo_c, idx, cols)
    np.maximum.at(hi_r, idx, rows); np.maximum.at(hi_c, idx, cols)
    present = hi_r >= 0
    boxes[present] = np.column_stack([lo_r, lo_c, hi_r, hi_c])[present]
    return boxes


def label_components(binary, keep_pixels: bool = False) -> list[Component]:
    labels, count = label_image(binary)
    if count == 0:
        return []
    sizes = np.bincount(labels.ravel(), minlength=count + 1)
    boxes = component_boxes(labels, count)
    members = None
    if keep_pixels:
        rows, cols = np.nonzero(labels)
        lab = labels[rows, cols]
        order = np.argsort(lab, kind="stable")
        splits = np.cumsum(sizes[1:])[:-1]
        members = np.split(np.column_stack([rows[order], cols[order]]), splits)
    return [
        Component(i + 1, int(sizes[i + 1]), BoundingBox(*map(int, boxes[i])),
                  members[i] if members is not None else None)
        for i in range(count)
    ]


def bounding_box(component) -> BoundingBox:
    """Tight box of a component's pixels (or of an ``(n, 2)`` pixel array)."""
    pixels = component.pixels if isinstance(component, Component) else component
    if pixels is None:
        if isinstance(component, Component) and component.box is not None:
            return component.box
        raise ValueError("component has no pixels")
    pixels = np.asarray(pixels)
    if pixels.size == 0:
        raise ValueError("component has no pixels")
    return BoundingBox(int(pixels[:, 0].min()), int(pixels[:, 1].min()),
                       int(pixels[:, 0].max()), int(pixels[:, 1].max()))
