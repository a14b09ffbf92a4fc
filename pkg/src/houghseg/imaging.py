"""Image I/O, grey conversion, denoising and skew handling.

Images are plain numpy arrays indexed ``[row, col]`` with the origin at the
top-left corner, so ``x`` is the column and ``y`` the row (growing downward).

* colour image: ``uint8`` array of shape ``(height, width, 3)`` in RGB order
* grey image:   ``uint8`` array of shape ``(height, width)``
* binary image: ``bool`` array of shape ``(height, width)``, True = foreground
"""
from __future__ import annotations

import math
import struct
import warnings

import numpy as np
from scipy import ndimage

__all__ = [
    "ImageFormatError",
    "ImageReadError",
    "CorruptHeaderError",
    "UnsupportedFormatError",
    "as_color",
    "as_gray",
    "as_binary",
    "load_image",
    "save_image",
    "binary_to_gray",
    "to_gray",
    "gray_to_color",
    "median_denoise",
    "rotated_shape",
    "rotate_points",
    "rotate",
    "estimate_skew",
]


class ImageFormatError(ValueError):
    """Base class for image decoding problems."""


class ImageReadError(ImageFormatError):
    """The file could not be opened or read."""


class CorruptHeaderError(ImageFormatError):
    """The file is too short or its header fields are inconsistent."""


class UnsupportedFormatError(ImageFormatError):
    """Valid container, but an encoding this module does not decode."""


def as_color(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"colour image must have shape (h, w, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("colour image must be at least 1x1")
    if arr.dtype != np.uint8:
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("colour channels must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def as_gray(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"grey image must be a non-empty 2-D array, got {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("grey intensities must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def as_binary(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"binary image must be 2-D, got {arr.shape}")
    return arr.astype(bool, copy=False)


# --------------------------------------------------------------------------
# BMP / PNG

_FILE_HEADER = struct.Struct("<2sIHHI")
_INFO_HEADER = struct.Struct("<IiiHHIIiiII")


def load_image(path) -> np.ndarray:
    """Read a 24-bit uncompressed BMP (or, if Pillow is available, a PNG).

    Returns an RGB ``uint8`` array of shape ``(height, width, 3)``.
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ImageReadError(f"cannot read {path}: {exc}") from exc

    if data[:8] == b"\x89PNG\r\n\x1a\n":
        return _load_png(path)
    return decode_bmp(data, name=str(path))


def _load_png(path) -> np.ndarray:
    try:
        from PIL import Image
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise UnsupportedFormatError("PNG input needs Pillow installed") from exc
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8).copy()


def decode_bmp(data: bytes, name: str = "<bytes>") -> np.ndarray:
    if len(data) < _FILE_HEADER.size + _INFO_HEADER.size:
        raise CorruptHeaderError(f"{name}: file too short for a BMP header ({len(data)} bytes)")
    magic, _size, _r1, _r2, offset = _FILE_HEADER.unpack_from(data, 0)
    if magic != b"BM":
        raise CorruptHeaderError(f"{name}: missing BM signature")
    (header_size, width, height, planes, bpp, compression,
     _img_size, _xppm, _yppm, _colors, _important) = _INFO_HEADER.unpack_from(data, _FILE_HEADER.size)
    if header_size < _INFO_HEADER.size:
        raise UnsupportedFormatError(f"{name}: info header of {header_size} bytes is not supported")
    if planes != 1 or width <= 0 or height == 0:
        raise CorruptHeaderError(f"{name}: bad dimensions or plane count ({width}x{height}, planes={planes})")
    if bpp != 24:
        raise UnsupportedFormatError(f"{name}: {bpp}-bit BMP is not supported (24-bit only)")
    if compression != 0:
        raise UnsupportedFormatError(f"{name}: compressed BMP (method {compression}) is not supported")

    top_down = height < 0
    height = abs(height)
    stride = (width * 3 + 3) & ~3
    end = offset + stride * height
    if offset < _FILE_HEADER.size + header_size or end > len(data):
        raise CorruptHeaderError(f"{name}: pixel array runs past end of file")

    rows = np.frombuffer(data, dtype=np.uint8, count=stride * height, offset=offset)
    rows = rows.reshape(height, stride)[:, : width * 3].reshape(height, width, 3)
    if not top_down:
        rows = rows[::-1]
    return rows[:, :, ::-1].copy()


def encode_bmp(img) -> bytes:
    """24-bit bottom-up BMP bytes for a colour, grey or binary image.

    Binary images are written with foreground black and background white.
    """
    arr = np.asarray(img)
    if arr.dtype == bool:
        arr = binary_to_gray(arr)
    if arr.ndim == 2:
        arr = gray_to_color(arr)
    arr = as_color(arr)
    height, width = arr.shape[:2]
    stride = (width * 3 + 3) & ~3
    image_size = stride * height
    offset = _FILE_HEADER.size + _INFO_HEADER.size

    buf = np.zeros((height, stride), dtype=np.uint8)
    buf[:, : width * 3] = arr[::-1, :, ::-1].reshape(height, width * 3)
    header = _FILE_HEADER.pack(b"BM", offset + image_size, 0, 0, offset)
    info = _INFO_HEADER.pack(_INFO_HEADER.size, width, height, 1, 24, 0, image_size, 2835, 2835, 0, 0)
    return header + info + buf.tobytes()


def save_image(path, img) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_bmp(img))


# --------------------------------------------------------------------------
# intensity conversions

def to_gray(img) -> np.ndarray:
    """Weighted grey level ``0.59 R + 0.30 G + 0.11 B``, rounded half up.

    These weights are not the usual luma weights (red and green are
    swapped relative to BT.601); they are kept as given.  Integer
    arithmetic keeps the rounding exact.
    """
    rgb = as_color(img).astype(np.int32)
    weighted = 59 * rgb[..., 0] + 30 * rgb[..., 1] + 11 * rgb[..., 2]
    return np.clip((weighted + 50) // 100, 0, 255).astype(np.uint8)


def gray_to_color(gray) -> np.ndarray:
    gray = as_gray(gray)
    return np.repeat(gray[:, :, None], 3, axis=2)


def binary_to_gray(binary) -> np.ndarray:
    """Foreground rendered black (0) on a white (255) background."""
    return np.where(as_binary(binary), 0, 255).astype(np.uint8)


def median_denoise(gray, size: int = 3) -> np.ndarray:
    """Median filter for impulse (salt-and-pepper) noise."""
    return ndimage.median_filter(as_gray(gray), size=size, mode="nearest")


# --------------------------------------------------------------------------
# rotation

def _fit_extent(extent: float, original: int) -> int:
    # same parity as the input keeps the centre on a pixel centre
    n = max(1, math.ceil(extent - 1e-9))
    if (n - original) % 2:
        n += 1
    return n


def rotated_shape(height: int, width: int, angle: float) -> tuple[int, int]:
    """Canvas (height, width) that holds an image rotated by ``angle`` degrees."""
    if angle == 0:
        return height, width
    a = math.radians(angle)
    c, s = abs(math.cos(a)), abs(math.sin(a))
    return _fit_extent(height * c + width * s, height), _fit_extent(width * c + height * s, width)


def rotate_points(rows, cols, shape: tuple[int, int], angle: float):
    """Map (row, col) coordinates through the same rotation as :func:`rotate`."""
    height, width = shape
    out_h, out_w = rotated_shape(height, width, angle)
    a = math.radians(angle)
    c, s = math.cos(a), math.sin(a)
    dx = np.asarray(cols, dtype=float) - (width - 1) / 2
    dy = np.asarray(rows, dtype=float) - (height - 1) / 2
    new_cols = c * dx - s * dy + (out_w - 1) / 2
    new_rows = s * dx + c * dy + (out_h - 1) / 2
    return new_rows, new_cols


def rotate(img, angle: float, fill: int = 255) -> np.ndarray:
    """Rotate a grey image about its centre with bilinear interpolation.

    Positive angles turn the content clockwise on screen (a horizontal
    stroke ends up descending to the right).  The canvas grows to hold the
    whole rotated image and uncovered area is filled with ``fill``.
    """
    gray = as_gray(img)
    if abs(angle) > 45:
        raise ValueError(f"rotation angle must satisfy |angle| <= 45, got {angle}")
    if angle == 0:
        return gray.copy()

    height, width = gray.shape
    out_h, out_w = rotated_shape(height, width, angle)
    a = math.radians(angle)
    c, s = math.cos(a), math.sin(a)

    ys, xs = np.mgrid[0:out_h, 0:out_w].astype(float)
    dx = xs - (out_w - 1) / 2
    dy = ys - (out_h - 1) / 2
    src_x = c * dx + s * dy + (width - 1) / 2
    src_y = -s * dx + c * dy + (height - 1) / 2

    x0 = np.floor(src_x).astype(np.int64)
    y0 = np.floor(src_y).astype(np.int64)
    fx = src_x - x0
    fy = src_y - y0

    padded = np.full((height + 2, width + 2), float(fill))
    padded[1:-1, 1:-1] = gray

    def sample(yy, xx):
        inside = (yy >= 0) & (yy < height) & (xx >= 0) & (xx < width)
        yy = np.where(inside, yy + 1, 0)
        xx = np.where(inside, xx + 1, 0)
        return padded[yy, xx]

    value = (sample(y0, x0) * (1 - fx) * (1 - fy)
             + sample(y0, x0 + 1) * fx * (1 - fy)
             + sample(y0 + 1, x0) * (1 - fx) * fy
             + sample(y0 + 1, x0 + 1) * fx * fy)
    return np.clip(np.floor(value + 0.5), 0, 255).astype(np.uint8)


def estimate_skew(edge_map, theta_range=(80.0, 100.0), step: float = 0.5) -> float:
    """Angle (degrees) that rotates the dominant text direction to horizontal.

    Searches normal angles in ``theta_range`` for the accumulator cell with
    the most votes and returns ``90 - theta``.  Ties go to the angle closest
    to 90 degrees.  Pass the result straight to :func:`rotate` to deskew.
    """
    from .hough import HoughParams, vote

    binary = as_binary(edge_map)
    params = HoughParams(theta_range[0], theta_range[1], step, connect_gap=0, min_votes=1)
    acc = vote(binary, params)
    peaks = acc.votes.max(axis=0) if acc.votes.size else np.zeros(acc.n_theta, dtype=np.int64)
    best = int(peaks.max()) if peaks.size else 0
    if best < 2:
        warnings.warn("no line evidence for skew estimation; assuming 0 degrees", RuntimeWarning,
                      stacklevel=2)
        return 0.0
    candidates = np.flatnonzero(peaks == best)
    thetas = acc.thetas[candidates]
    pick = candidates[np.lexsort((thetas, np.abs(thetas - 90.0)))[0]]
    return float(90.0 - acc.thetas[pick])
