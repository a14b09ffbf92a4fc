"""Four-direction Sobel gradient and the binarised edge map."""
from __future__ import annotations

import numpy as np

from .binarize import otsu_threshold
from .imaging import as_gray

__all__ = ["SOBEL_MASKS", "COMBINE_RULES", "mask_responses", "sobel_gradient", "edge_map"]

# horizontal, vertical and the two diagonals
SOBEL_MASKS: dict[str, np.ndarray] = {
    "horizontal": np.array([[+1, +2, +1],
                            [0, 0, 0],
                            [-1, -2, -1]]),
    "vertical": np.array([[-1, 0, +1],
                          [-2, 0, +2],
                          [-1, 0, +1]]),
    "diagonal": np.array([[0, +1, +2],
                          [-1, 0, +1],
                          [-2, -1, 0]]),
    "antidiagonal": np.array([[-2, -1, 0],
                              [-1, 0, +1],
                              [0, +1, +2]]),
}

COMBINE_RULES = ("max", "sum", "rss")


def _check_size(gray: np.ndarray) -> None:
    if gray.shape[0] < 3 or gray.shape[1] < 3:
        raise ValueError(f"edge detection needs an image of at least 3x3, got {gray.shape}")


def mask_responses(img) -> dict[str, np.ndarray]:
    """Signed response of every mask at every pixel.

    The mask is applied as a sliding weighted sum, ``sum(mask[a, b] *
    img[i + a - 1, j + b - 1])``.  Border pixels, where the window leaves
    the image, are 0.
    """
    gray = as_gray(img)
    _check_size(gray)
    src = gray.astype(np.int32)
    h, w = src.shape
    out = {}
    for name, mask in SOBEL_MASKS.items():
        acc = np.zeros((h - 2, w - 2), dtype=np.int32)
        for a in range(3):
            for b in range(3):
                if mask[a, b]:
                    acc += mask[a, b] * src[a:a + h - 2, b:b + w - 2]
        full = np.zeros((h, w), dtype=np.int32)
        full[1:-1, 1:-1] = acc
        out[name] = full
    return out


def sobel_gradient(img, combine: str = "max") -> np.ndarray:
    """Non-negative integer gradient magnitude from the four mask responses.

    ``combine`` is ``"max"`` (largest absolute response, the default),
    ``"sum"`` (sum of absolute responses) or ``"rss"`` (root sum of squares,
    rounded).
    """
    responses = np.stack([np.abs(r) for r in mask_responses(img).values()])
    if combine == "max":
        return responses.max(axis=0)
    if combine == "sum":
        return responses.sum(axis=0)
    if combine == "rss":
        sq = (responses.astype(np.int64) ** 2).sum(axis=0)
        return np.floor(np.sqrt(sq) + 0.5).astype(np.int32)
    raise ValueError(f"unknown combine rule {combine!r}; expected one of {COMBINE_RULES}")


def edge_map(img, combine: str = "max") -> np.ndarray:
    """High-gradient pixels as foreground, cut at the Otsu level of the
    magnitude histogram."""
    magnitude = sobel_gradient(img, combine)
    t = otsu_threshold(np.bincount(magnitude.ravel()))
    return magnitude > t
