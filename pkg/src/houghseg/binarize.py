"""Global Otsu thresholding."""
from __future__ import annotations

import numpy as np

from .imaging import as_gray

__all__ = ["histogram", "otsu_threshold", "binarize", "threshold_image"]


def histogram(img, levels: int = 256) -> np.ndarray:
    """Counts per intensity level; ``counts.sum()`` equals the pixel count."""
    gray = as_gray(img)
    return np.bincount(gray.ravel(), minlength=levels).astype(np.int64)


def otsu_threshold(counts) -> int:
    """Level ``t`` maximising the between-class variance of ``{<= t}`` vs ``{> t}``.

    Works on a histogram of any length.  The variance is compared as an
    exact rational ``(N*S0 - S*n0)**2 / (n0*n1)`` using Python integers, so
    plateaus tie exactly and the smallest maximising ``t`` wins.  A histogram
    with a single occupied level returns that level.
    """
    counts = [int(c) for c in np.asarray(counts).ravel()]
    if any(c < 0 for c in counts):
        raise ValueError("histogram counts must be non-negative")
    total = sum(counts)
    if total < 1:
        raise ValueError("empty histogram")
    weighted_total = sum(level * c for level, c in enumerate(counts))

    best_t, best_num, best_den = None, 0, 1
    n0 = s0 = 0
    for t, c in enumerate(counts[:-1]):
        n0 += c
        s0 += t * c
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            continue
        num = (total * s0 - weighted_total * n0) ** 2
        den = n0 * n1
        if best_t is None or num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den

    if best_t is None or best_num == 0:
        # one occupied level
        return next(level for level, c in enumerate(counts) if c)
    return best_t


def threshold_image(img, invert: bool = False) -> tuple[np.ndarray, int]:
    """Binary image and the Otsu level it was cut at."""
    gray = as_gray(img)
    t = otsu_threshold(histogram(gray))
    mask = gray > t if invert else gray <= t
    return mask, t


def binarize(img, invert: bool = False) -> np.ndarray:
    """Dark pixels (``<= t``) become foreground; ``invert`` flips this for
    light text on a dark background."""
    return threshold_image(img, invert)[0]
