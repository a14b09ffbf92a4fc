"""
Plate candidates in street-like frames
======================================

The lpr profile keeps word boxes whose aspect ratio lies in [2, 6] and
whose area is 0.1% to 5% of the frame.  These limits are a tunable
heuristic, not measured plate statistics.
"""
import dataclasses

from houghseg.eval import generate_lpr_frame
from houghseg.pipeline import PROFILES, run_pipeline

open_profile = dataclasses.replace(PROFILES["lpr"], plate_filter=None)
hits = 0
for seed in range(10):
    img, truth, plate = generate_lpr_frame(seed)
    everything = run_pipeline(img, open_profile, truth.image_id)
    plates = run_pipeline(img, "lpr", truth.image_id)
    found = [tuple(w.box) for w in plates.words]
    hits += found == [tuple(truth.words[plate][0])]
    print(f"{truth.image_id}: {len(everything.words)} text boxes, kept {found}")
print(f"plate alone on {hits}/10 frames")
