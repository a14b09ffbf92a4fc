"""
Reading, writing and greying BMP images
=======================================

Images are plain numpy arrays: ``(h, w, 3)`` uint8 for colour, ``(h, w)``
uint8 for grey and ``(h, w)`` bool for binary masks.
"""
from pathlib import Path

import numpy as np

from houghseg.imaging import decode_bmp, encode_bmp, load_image, save_image, to_gray

out = Path("demo_output")
out.mkdir(exist_ok=True)

# a small colour gradient: red grows to the right, blue grows downwards
rows, cols = np.mgrid[0:64, 0:96]
img = np.zeros((64, 96, 3), dtype=np.uint8)
img[..., 0] = cols * 255 // 95
img[..., 2] = rows * 255 // 63
img[20:44, 30:66, 1] = 200

save_image(out / "gradient.bmp", img)
back = load_image(out / "gradient.bmp")
print("round trip exact:", np.array_equal(back, img))

# rows in a 24-bit BMP are padded to 4 bytes; 96 * 3 is already a multiple
print("file size:", len(encode_bmp(img)), "bytes =", 54, "+", 64 * 96 * 3)

# odd widths pick up padding but still decode to the same pixels
odd = img[:, :31]
print("odd width round trip:", np.array_equal(decode_bmp(encode_bmp(odd)), odd))

# grey level = 0.59 R + 0.30 G + 0.11 B, rounded half up
for rgb in [(255, 255, 255), (255, 0, 0), (0, 255, 0), (0, 0, 255)]:
    print(rgb, "->", int(to_gray(np.array([[rgb]], dtype=np.uint8))[0, 0]))

save_image(out / "gradient.gray.bmp", to_gray(img))
