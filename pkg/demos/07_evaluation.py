"""
Scoring: correct, over- and under-segmented
===========================================

A prediction overlaps a ground-truth box when their IoU is at least 0.5 or
it covers at least half the ground-truth area.  A truth box with one
exclusive overlapping prediction is correct, with several it is over
segmented, and one sharing its prediction with another truth box is under
segmented.
"""
from houghseg.eval import LayoutSpec, generate_page, match_and_score, report_table, summarize
from houghseg.pipeline import run_pipeline

reports = []

# clean and noisy pages
for seed, noise in [(1, 0.0), (2, 0.02)]:
    img, truth = generate_page(LayoutSpec(seed=seed, noise_prob=noise), image_id=f"noise-{noise}")
    reports.append(match_and_score(run_pipeline(img, "document", truth.image_id), truth))

# a 64-pixel gap inside line 4 is wider than the line stage bridges: one extra line.
# Neither half covers half of the widened truth box, so the line scores as
# missed with two spurious halves rather than over segmented.
img, truth = generate_page(LayoutSpec(seed=3, gap_overrides=((4, 3, 64),)), image_id="wide-gap")
reports.append(match_and_score(run_pipeline(img, "document", truth.image_id), truth))

# a 12-pixel gap between two words is bridged by the word stage: one merged pair
img, truth = generate_page(LayoutSpec(seed=3, gap_overrides=((6, 2, 12),)), image_id="narrow-gap")
reports.append(match_and_score(run_pipeline(img, "document", truth.image_id), truth))

print(report_table(reports))
total = summarize(reports)
print(f"overall: {total.words.percent('correct'):.1f}% words correct, "
      f"{total.words.percent('under_segmented'):.1f}% under segmented")
