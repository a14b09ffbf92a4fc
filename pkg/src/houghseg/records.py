"""Box list files.

Comma-separated, one header row, one record per box::

    image_id,kind,parent,row_start,col_start,row_end,col_end

``kind`` is ``line`` or ``word``.  Coordinates are inclusive.  ``parent`` is
empty for lines; for words it is the 0-based position of the parent among
the same image's line records.  Lines of an image come before its words.
The same format carries predictions and ground truth.
"""
from __future__ import annotations

import csv
import io
from collections import defaultdict

from .ccl import BoundingBox
from .eval import GroundTruth

__all__ = ["HEADER", "BoxFileError", "format_records", "result_records", "truth_records", "parse_records"]

HEADER = ("image_id", "kind", "parent", "row_start", "col_start", "row_end", "col_end")


class BoxFileError(ValueError):
    pass


def _rows(image_id, lines, words):
    for box in lines:
        yield (image_id, "line", "", *box)
    for box, parent in words:
        yield (image_id, "word", parent, *box)


def result_records(result) -> list[tuple]:
    return list(_rows(result.image_id, [s.box for s in result.lines],
                      [(s.box, s.parent) for s in result.words]))


def truth_records(truth: GroundTruth) -> list[tuple]:
    return list(_rows(truth.image_id, truth.lines, truth.words))


def format_records(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    writer.writerows(records)
    return buf.getvalue()


def parse_records(text: str, source: str = "<boxes>") -> dict[str, GroundTruth]:
    """Group box records by image id.

    Raises :class:`BoxFileError` naming the file and line of the first bad row.
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != HEADER:
        raise BoxFileError(f"{source}:1: expected header {','.join(HEADER)}")

    lines: dict[str, list] = defaultdict(list)
    words: dict[str, list] = defaultdict(list)
    order: list[str] = []
    for row in reader:
        lineno = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(HEADER):
            raise BoxFileError(f"{source}:{lineno}: expected {len(HEADER)} fields, got {len(row)}")
        image_id, kind, parent = (cell.strip() for cell in row[:3])
        try:
            box = BoundingBox(*(int(cell) for cell in row[3:]))
        except ValueError:
            raise BoxFileError(f"{source}:{lineno}: coordinates must be integers") from None
        if box.row_end < box.row_start or box.col_end < box.col_start:
            raise BoxFileError(f"{source}:{lineno}: box has end before start")
        if image_id not in lines and image_id not in words:
            order.append(image_id)
        if kind == "line":
            lines[image_id].append(box)
        elif kind == "word":
            try:
                parent_index = int(parent)
            except ValueError:
                raise BoxFileError(f"{source}:{lineno}: word record needs an integer parent") from None
            words[image_id].append((box, parent_index))
        else:
            raise BoxFileError(f"{source}:{lineno}: unknown kind {kind!r}")

    out = {}
    for image_id in order:
        n_lines = len(lines[image_id])
        for box, parent in words[image_id]:
            if not 0 <= parent < n_lines:
                raise BoxFileError(f"{source}: image {image_id!r} has a word whose parent {parent} is not a line")
        out[image_id] = GroundTruth(image_id, lines[image_id], words[image_id])
    return out
