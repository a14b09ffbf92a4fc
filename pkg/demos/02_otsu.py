"""
Global Otsu threshold
=====================

The threshold maximises the between-class variance of the grey histogram.
Dark pixels (at or below the threshold) become foreground.
"""
import numpy as np

from houghseg.binarize import binarize, histogram, otsu_threshold

rng = np.random.default_rng(0)

# ink around 40, paper around 210, plus a little noise
page = np.where(rng.random((80, 120)) < 0.15, 40, 210) + rng.normal(0, 12, (80, 120))
page = np.clip(page, 0, 255).astype(np.uint8)

counts = histogram(page)
t = otsu_threshold(counts)
print("threshold:", t)

mask = binarize(page)
print("foreground share: %.3f" % mask.mean())

# equal spikes at 50 and 200: every split in [50, 199] is optimal,
# ties go to the smallest
spikes = np.zeros(256, dtype=int)
spikes[[50, 200]] = 10
print("two spikes ->", otsu_threshold(spikes))

# the histogram may be longer than 256 bins, e.g. for gradient magnitudes
wide = np.bincount(rng.integers(0, 1021, 500), minlength=1021)
print("1021-bin histogram ->", otsu_threshold(wide))

# light text on a dark plate: flip the polarity
plate = 255 - page
print("inverted mask matches:", np.array_equal(binarize(plate, invert=True), mask))
