"""Command line front end: ``segment``, ``generate`` and ``evaluate``."""
from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import eval as ev
from .imaging import ImageFormatError, binary_to_gray, load_image, save_image
from .pipeline import PROFILES, DomainProfile, PipelineError, get_profile, load_profile, run_pipeline
from .records import BoxFileError, format_records, parse_records, result_records, truth_records

PROFILE_DIR_ENV = "HOUGHSEG_PROFILE_DIR"


def resolve_profile(spec: str) -> DomainProfile:
    """``@path`` loads a profile file; a bare name looks in ``$HOUGHSEG_PROFILE_DIR``
    for ``<name>.profile`` before falling back to the built-in profile."""
    if spec.startswith("@"):
        return load_profile(spec[1:])
    directory = os.environ.get(PROFILE_DIR_ENV)
    if directory:
        candidate = Path(directory) / f"{spec}.profile"
        if candidate.is_file():
            return load_profile(candidate)
    return get_profile(spec)


def draw_boxes(binary: np.ndarray, boxes) -> np.ndarray:
    """Binary image rendered black on white with 1-pixel black box outlines."""
    canvas = binary_to_gray(binary)
    for b in boxes:
        canvas[b.row_start, b.col_start:b.col_end + 1] = 0
        canvas[b.row_end, b.col_start:b.col_end + 1] = 0
        canvas[b.row_start:b.row_end + 1, b.col_start] = 0
        canvas[b.row_start:b.row_end + 1, b.col_end] = 0
    return canvas


def _segment_one(path: str, profile: DomainProfile, out_dir: str, debug: bool) -> tuple[str, str | None]:
    image_id = Path(path).stem
    try:
        img = load_image(path)
        result = run_pipeline(img, profile, image_id=image_id, debug=debug)
    except (ImageFormatError, PipelineError) as exc:
        return path, str(exc)

    out = Path(out_dir)
    binary = result.artifacts["binary"]
    save_image(out / f"{image_id}.overlay.bmp", draw_boxes(binary, [w.box for w in result.words]))
    (out / f"{image_id}.boxes.csv").write_text(format_records(result_records(result)))
    if debug:
        for name, data in result.artifacts.items():
            save_image(out / f"{image_id}.{name}.bmp", data)
    return path, None


def cmd_segment(args) -> int:
    try:
        profile = resolve_profile(args.profile)
    except (OSError, ValueError) as exc:
        print(f"error: profile: {exc}", file=sys.stderr)
        return 2
    overrides = {}
    if args.invert:
        overrides["invert_polarity"] = True
    if args.deskew:
        overrides["deskew_enabled"] = True
    if args.skip_line_stage:
        overrides["skip_line_stage"] = True
    profile = dataclasses.replace(profile, **overrides)

    missing = [p for p in args.inputs if not Path(p).is_file()]
    for p in missing:
        print(f"error: {p}: no such file", file=sys.stderr)
    inputs = [p for p in args.inputs if p not in missing]
    stems = [Path(p).stem for p in inputs]
    if len(set(stems)) != len(stems):
        print("error: input file names must have distinct stems", file=sys.stderr)
        return 2
    if not inputs:
        return 1

    try:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        probe = Path(args.out) / ".write-test"
        probe.write_bytes(b"")
        probe.unlink()
    except OSError as exc:
        print(f"error: output directory {args.out}: {exc}", file=sys.stderr)
        return 2

    jobs = [(p, profile, args.out, args.debug) for p in inputs]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_segment_one, *zip(*jobs)))
    else:
        outcomes = [_segment_one(*job) for job in jobs]

    failed = [(p, msg) for p, msg in outcomes if msg]
    for p, msg in failed:
        print(f"error: {p}: {msg}", file=sys.stderr)
    return 1 if failed or missing else 0


_LAYOUT_TUPLES = {"chars_per_word", "char_width", "char_height", "canvas"}


def parse_layout(text: str, source: str = "<layout>") -> dict:
    """``key = value`` overrides for :class:`~houghseg.eval.LayoutSpec`.

    Range values are written ``low,high``.
    """
    fields = {f.name: f for f in dataclasses.fields(ev.LayoutSpec)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or key not in fields or key == "gap_overrides":
            raise ValueError(f"{source}:{lineno}: expected 'key = value' with a layout key, got {line!r}")
        try:
            if key in _LAYOUT_TUPLES:
                out[key] = tuple(int(v) for v in value.split(","))
            elif key in ("noise_prob", "skew_deg"):
                out[key] = float(value)
            else:
                out[key] = int(value)
        except ValueError:
            raise ValueError(f"{source}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def cmd_generate(args) -> int:
    try:
        base = parse_layout(Path(args.layout).read_text(), args.layout) if args.layout else {}
    except (OSError, ValueError) as exc:
        print(f"error: layout: {exc}", file=sys.stderr)
        return 2
    for key in ("n_lines", "words_per_line", "noise_prob", "skew_deg"):
        value = getattr(args, key)
        if value is not None:
            base[key] = value

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for i in range(args.count):
        seed = args.seed + i
        try:
            if args.kind == "lpr":
                img, truth, _ = ev.generate_lpr_frame(seed)
            else:
                img, truth = ev.generate_page(ev.LayoutSpec(**{**base, "seed": seed}))
        except ValueError as exc:
            print(f"error: seed {seed}: {exc}", file=sys.stderr)
            return 2
        save_image(out / f"{truth.image_id}.bmp", img)
        (out / f"{truth.image_id}.truth.csv").write_text(format_records(truth_records(truth)))
        records.extend(truth_records(truth))
    (out / "truth.csv").write_text(format_records(records))
    return 0


def _read_boxes(paths) -> dict:
    merged = {}
    for p in paths:
        merged.update(parse_records(Path(p).read_text(), str(p)))
    return merged


def cmd_evaluate(args) -> int:
    if not 0 < args.iou <= 1:
        print("error: --iou must lie in (0, 1]", file=sys.stderr)
        return 2
    try:
        truth = _read_boxes(args.truth)
        predicted = _read_boxes(args.pred)
    except (OSError, BoxFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    reports = []
    for image_id in sorted(truth):
        pred = predicted.get(image_id, ev.GroundTruth(image_id, [], []))
        reports.append(ev.match_and_score(pred, truth[image_id], args.iou))
    for image_id in sorted(set(predicted) - set(truth)):
        print(f"warning: predictions for {image_id!r} have no ground truth", file=sys.stderr)

    table = ev.report_table(reports)
    sys.stdout.write(table)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(table)
        (out / "report.jsonl").write_text(ev.report_records(reports))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="houghseg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    seg = sub.add_parser("segment", help="segment lines and words in image files")
    seg.add_argument("inputs", nargs="+", help="BMP (or PNG) images")
    seg.add_argument("--out", required=True, help="output directory")
    seg.add_argument("--profile", default="document",
                     help=f"one of {', '.join(PROFILES)} or @file (default: document)")
    seg.add_argument("--debug", action="store_true", help="also write intermediate images")
    seg.add_argument("--invert", action="store_true", help="light text on a dark background")
    seg.add_argument("--deskew", action="store_true", help="estimate and undo page rotation")
    seg.add_argument("--skip-line-stage", action="store_true", help="look for words in the whole image")
    seg.add_argument("--jobs", type=int, default=1, help="images processed in parallel")
    seg.set_defaults(func=cmd_segment)

    gen = sub.add_parser("generate", help="write synthetic images with ground truth")
    gen.add_argument("--out", required=True)
    gen.add_argument("--kind", choices=("page", "lpr"), default="page")
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--layout", help="key = value file overriding the page layout")
    gen.add_argument("--lines", dest="n_lines", type=int)
    gen.add_argument("--words", dest="words_per_line", type=int)
    gen.add_argument("--noise", dest="noise_prob", type=float)
    gen.add_argument("--skew", dest="skew_deg", type=float)
    gen.set_defaults(func=cmd_generate)

    ev_p = sub.add_parser("evaluate", help="score box files against ground truth")
    ev_p.add_argument("--pred", nargs="+", required=True, help="predicted box files")
    ev_p.add_argument("--truth", nargs="+", required=True, help="ground-truth box files")
    ev_p.add_argument("--iou", type=float, default=0.5)
    ev_p.add_argument("--out", help="directory for report.txt and report.jsonl")
    ev_p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
