"""
Four-direction Sobel edges
==========================

The horizontal, vertical and two diagonal masks are applied and the
gradient magnitude is the largest absolute response.  Otsu on that
magnitude gives the binary edge map.
"""
from pathlib import Path

import numpy as np

from houghseg.edges import SOBEL_MASKS, edge_map, mask_responses, sobel_gradient
from houghseg.imaging import save_image

out = Path("demo_output")
out.mkdir(exist_ok=True)

for name, mask in SOBEL_MASKS.items():
    print(name)
    print(mask)

# a dark rectangle on white paper
gray = np.full((40, 60), 255, dtype=np.uint8)
gray[12:28, 15:45] = 0

responses = mask_responses(gray)
for name, r in responses.items():
    print(f"{name:>13}: max |response| = {np.abs(r).max()}")

mag = sobel_gradient(gray)
edges = edge_map(gray)
print("edge pixels:", int(edges.sum()), "interior untouched:", not edges[16:24, 20:40].any())

# "sum" and "rss" are available for comparison
for rule in ("max", "sum", "rss"):
    print(rule, int(sobel_gradient(gray, rule).max()))

save_image(out / "rectangle.edges.bmp", edges)
