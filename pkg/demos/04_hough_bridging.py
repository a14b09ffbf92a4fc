"""
Hough voting and gap bridging
=============================

Every foreground pixel votes for ``rho = x cos(theta) + y sin(theta)``
over a range of angles.  Cells with enough votes are accepted lines; the
Hough image keeps their pixels and fills gaps along each line that are
no longer than ``connect_gap``.
"""
import numpy as np

from houghseg.ccl import label_components
from houghseg.hough import LINE_PARAMS, WORD_PARAMS, accept_lines, hough_image, synthesize_hough_image, vote

# a 50-pixel run on row 20
m = np.zeros((30, 60), dtype=bool)
m[20, 0:50] = True
acc = vote(m, LINE_PARAMS)
print("accumulator:", acc.votes.shape, "(rho x theta)")
best = accept_lines(acc, LINE_PARAMS, m)[0]
print(f"strongest line: rho={best.rho} theta={best.theta:g} votes={best.votes}")

# two 10-pixel runs; the word profile bridges gaps up to 20 pixels
for gap in (15, 25):
    runs = np.zeros((12, 30 + gap), dtype=bool)
    runs[5, 0:10] = True
    runs[5, 10 + gap:20 + gap] = True
    lines = accept_lines(vote(runs, WORD_PARAMS), WORD_PARAMS, runs)
    out = synthesize_hough_image(runs, lines, WORD_PARAMS)
    print(f"gap {gap}: {len(lines)} accepted cells, {int(out.sum())} pixels, "
          f"{len(label_components(out))} component(s)")

# the vectorised path used by the pipeline gives the same image
rng = np.random.default_rng(1)
speckle = rng.random((40, 40)) < 0.1
slow = synthesize_hough_image(speckle, accept_lines(vote(speckle, WORD_PARAMS), WORD_PARAMS, speckle),
                              WORD_PARAMS)
print("fast path agrees:", np.array_equal(hough_image(speckle, WORD_PARAMS), slow))
