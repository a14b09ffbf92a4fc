import struct
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from PIL import Image

from houghseg.edges import edge_map
from houghseg.eval import LayoutSpec, generate_page
from houghseg.imaging import (CorruptHeaderError, ImageReadError, UnsupportedFormatError, decode_bmp,
                              encode_bmp, estimate_skew, gray_to_color, load_image, rotate, save_image,
                              to_gray)


def test_load_white_2x2(tmp_path):
    path = tmp_path / "white.bmp"
    save_image(path, np.full((2, 2, 3), 255, dtype=np.uint8))
    img = load_image(path)
    assert img.shape == (2, 2, 3)
    assert (img == 255).all()


def test_load_hand_assembled_1x1():
    # 14-byte file header + 40-byte info header + one BGR pixel padded to 4 bytes
    pixel = bytes([30, 20, 10, 0])
    data = (b"BM" + struct.pack("<IHHI", 58, 0, 0, 54)
            + struct.pack("<IiiHHIIiiII", 40, 1, 1, 1, 24, 0, 4, 0, 0, 0, 0) + pixel)
    img = decode_bmp(data)
    assert img.shape == (1, 1, 3)
    assert img[0, 0].tolist() == [10, 20, 30]


def test_load_pillow_written_bmp(tmp_path):
    rng = np.random.default_rng(3)
    arr = rng.integers(0, 256, size=(7, 5, 3), dtype=np.uint8)
    path = tmp_path / "pil.bmp"
    Image.fromarray(arr).save(path)
    assert np.array_equal(load_image(path), arr)


def test_pillow_reads_our_bmp(tmp_path):
    rng = np.random.default_rng(4)
    arr = rng.integers(0, 256, size=(6, 9, 3), dtype=np.uint8)
    path = tmp_path / "ours.bmp"
    save_image(path, arr)
    with Image.open(path) as im:
        assert np.array_equal(np.asarray(im.convert("RGB")), arr)


def test_png_ingestion(tmp_path):
    arr = np.arange(2 * 3 * 3, dtype=np.uint8).reshape(2, 3, 3)
    path = tmp_path / "x.png"
    Image.fromarray(arr).save(path)
    assert np.array_equal(load_image(path), arr)


def test_binary_written_black_on_white():
    mask = np.array([[True, False]])
    img = decode_bmp(encode_bmp(mask))
    assert img[0, 0].tolist() == [0, 0, 0]
    assert img[0, 1].tolist() == [255, 255, 255]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 13), st.integers(1, 13), st.integers(0, 2**32 - 1))
def test_bmp_round_trip(h, w, seed):
    arr = np.random.default_rng(seed).integers(0, 256, size=(h, w, 3), dtype=np.uint8)
    assert np.array_equal(decode_bmp(encode_bmp(arr)), arr)


def test_zero_length_file_is_corrupt_header(tmp_path):
    path = tmp_path / "empty.bmp"
    path.write_bytes(b"")
    with pytest.raises(CorruptHeaderError):
        load_image(path)


def test_missing_file_is_read_error(tmp_path):
    with pytest.raises(ImageReadError):
        load_image(tmp_path / "nope.bmp")


def test_other_bit_depth_is_unsupported():
    data = bytearray(encode_bmp(np.zeros((2, 2, 3), dtype=np.uint8)))
    data[28:30] = struct.pack("<H", 8)
    with pytest.raises(UnsupportedFormatError):
        decode_bmp(bytes(data))


def test_truncated_pixels_is_corrupt():
    data = encode_bmp(np.zeros((4, 4, 3), dtype=np.uint8))
    with pytest.raises(CorruptHeaderError):
        decode_bmp(data[:-5])


def test_errors_are_distinct_types():
    assert len({CorruptHeaderError, UnsupportedFormatError, ImageReadError}) == 3
    assert not issubclass(CorruptHeaderError, UnsupportedFormatError)


@pytest.mark.parametrize("rgb, grey", [((0, 0, 0), 0), ((255, 255, 255), 255), ((255, 0, 0), 150),
                                       ((0, 255, 0), 77), ((0, 0, 255), 28)])
def test_to_gray_values(rgb, grey):
    # 0.30*255 = 76.5 rounds half up to 77; 0.11*255 = 28.05 -> 28
    assert to_gray(np.array([[rgb]], dtype=np.uint8))[0, 0] == grey


def test_to_gray_replicated_grey_is_identity():
    g = np.arange(256, dtype=np.uint8).reshape(16, 16)
    assert np.array_equal(to_gray(gray_to_color(g)), g)


def test_rotate_zero_is_identity():
    g = np.random.default_rng(0).integers(0, 256, size=(9, 14), dtype=np.uint8)
    out = rotate(g, 0)
    assert out.shape == g.shape and np.array_equal(out, g)


def test_rotate_keeps_centre_dark():
    g = np.full((11, 11), 255, dtype=np.uint8)
    g[5, 5] = 0
    twice = rotate(rotate(g, 45), 45)
    h, w = twice.shape
    assert h % 2 == 1 and w % 2 == 1
    assert twice[h // 2, w // 2] < 128


@pytest.mark.parametrize("angle", [-30, -7.5, 3, 12, 45])
def test_rotate_uniform_content_stays_uniform(angle):
    g = np.full((20, 31), 90, dtype=np.uint8)
    out = rotate(g, angle)
    values = set(np.unique(out).tolist())
    assert 90 in values
    # every pixel is content, background or a blend of the two
    assert values <= set(range(90, 256))
    assert out[out.shape[0] // 2, out.shape[1] // 2] == 90


def test_rotate_positive_angle_is_clockwise():
    g = np.full((41, 41), 255, dtype=np.uint8)
    g[20, 5:36] = 0
    out = rotate(g, 10)
    rows, cols = np.nonzero(out < 128)
    # the stroke descends to the right on screen
    assert np.corrcoef(cols, rows)[0, 1] > 0.9


def test_rotate_rejects_large_angles():
    with pytest.raises(ValueError):
        rotate(np.zeros((3, 3), dtype=np.uint8), 46)


def test_skew_of_horizontal_row_is_zero():
    m = np.zeros((30, 80), dtype=bool)
    m[12, 5:75] = True
    assert estimate_skew(m) == 0.0


def test_skew_of_sloped_row():
    m = np.zeros((60, 120), dtype=bool)
    slope = np.tan(np.radians(3))
    for x in range(10, 110):
        m[int(round(20 + x * slope)), x] = True
    assert abs(estimate_skew(m) - (-3.0)) <= 0.5


def test_skew_of_single_pixel_warns():
    m = np.zeros((5, 5), dtype=bool)
    m[2, 2] = True
    with pytest.warns(RuntimeWarning):
        assert estimate_skew(m) == 0.0


def test_skew_of_empty_map_warns():
    with pytest.warns(RuntimeWarning):
        assert estimate_skew(np.zeros((5, 5), dtype=bool)) == 0.0


@pytest.mark.parametrize("delta", range(-5, 6))
def test_skew_recovers_page_rotation(delta):
    img, _ = generate_page(LayoutSpec(n_lines=6, words_per_line=5, seed=11, skew_deg=delta))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        skew = estimate_skew(edge_map(to_gray(img)))
    assert abs(skew - (-delta)) <= 0.5
