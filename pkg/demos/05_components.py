"""
Connected components
====================

Two-pass labelling with union-find, 4-connectivity.  Labels follow the
scan order of each component's first pixel.
"""
import time

import numpy as np

from houghseg.ccl import label_components, label_image

m = np.array([
    [1, 1, 0, 0, 1],
    [0, 1, 0, 1, 1],
    [0, 0, 0, 0, 0],
    [1, 0, 1, 1, 0],
], dtype=bool)
labels, n = label_image(m)
print(labels)
for c in label_components(m):
    print(c.label, c.pixel_count, tuple(c.box))

# diagonal neighbours are not connected
diag = np.eye(4, dtype=bool)
print("diagonal pixels ->", label_image(diag)[1], "components")

# a 512 x 512 serpentine: one component, no recursion involved
snake = np.ones((512, 512), dtype=bool)
snake[1::4, :-1] = False
snake[3::4, 1:] = False
start = time.perf_counter()
(comp,) = label_components(snake)
print(f"serpentine: {comp.pixel_count} pixels in one component, {time.perf_counter() - start:.3f}s")
