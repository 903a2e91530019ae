"""Keyword density over equal-length time slices of a subtitle file.

Used to pick scenes worth showing to learners: slice the file into ``n``
equal-duration parts, count keywords per part, take the densest few.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPartitionCount
from .lexicon import KeywordAnnotation
from .srt_model import Document, TokenKind, format_timestamp, tokenize

__all__ = [
    "PartitionStats",
    "partition_density",
    "top_partitions",
    "format_csv",
    "format_table",
]

CSV_HEADER = ("partition", "start_ms", "end_ms", "keywords", "words", "density")


@dataclass(frozen=True)
class PartitionStats:
    index: int
    time_range: tuple[int, int]
    cue_range: tuple[int, int] | None  # ordinals into Document.cues, inclusive
    keyword_count: int
    word_count: int

    @property
    def density(self) -> float:
        return self.keyword_count / max(self.word_count, 1)


def partition_density(doc: Document, ann: KeywordAnnotation, n: int = 30) -> list[PartitionStats]:
    """Split ``[first start, last end)`` into ``n`` equal parts and count per part.

    Each cue is counted in the part containing its start time. Part
    boundaries are integer milliseconds, ``start + span * i // n``.
    """
    if n < 1:
        raise InvalidPartitionCount(n)
    if not doc.cues:
        raise ValueError("cannot partition an empty document")
    first = doc.cues[0].start
    last = max(c.end for c in doc.cues)
    bounds = first + (np.arange(n + 1, dtype=np.int64) * (last - first)) // n

    starts = np.array([c.start for c in doc.cues], dtype=np.int64)
    part = np.clip(np.searchsorted(bounds, starts, side="right") - 1, 0, n - 1)

    words_per_cue = np.zeros(len(doc.cues), dtype=np.int64)
    for tok in tokenize(doc):
        if tok.kind is TokenKind.WORD:
            words_per_cue[tok.cue_index] += 1
    kw = np.bincount(part, weights=np.asarray(ann.counts, dtype=np.int64), minlength=n)
    words = np.bincount(part, weights=words_per_cue, minlength=n)

    stats = []
    for i in range(n):
        members = np.flatnonzero(part == i)
        stats.append(
            PartitionStats(
                index=i,
                time_range=(int(bounds[i]), int(bounds[i + 1])),
                cue_range=(int(members[0]), int(members[-1])) if members.size else None,
                keyword_count=int(kw[i]),
                word_count=int(words[i]),
            )
        )
    return stats


def top_partitions(stats: list[PartitionStats], k: int) -> list[PartitionStats]:
    """The ``k`` partitions with most keywords; ties go to the earlier partition."""
    if not 1 <= k <= len(stats):
        raise ValueError(f"k must be in 1..{len(stats)}, got {k}")
    return sorted(stats, key=lambda s: (-s.keyword_count, s.index))[:k]


def format_csv(stats: list[PartitionStats]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in stats:
        writer.writerow((s.index, *s.time_range, s.keyword_count, s.word_count, f"{s.density:.4f}"))
    return buf.getvalue()


def format_table(stats: list[PartitionStats], top: list[PartitionStats] = ()) -> str:
    picked = {s.index for s in top}
    rows = [f"{'part':>4}  {'from':>12}  {'to':>12}  {'kw':>5}  {'words':>6}  density"]
    for s in stats:
        mark = "  *" if s.index in picked else ""
        rows.append(
            f"{s.index:>4}  {format_timestamp(s.time_range[0]):>12}  "
            f"{format_timestamp(s.time_range[1]):>12}  {s.keyword_count:>5}  "
            f"{s.word_count:>6}  {s.density:.4f}{mark}"
        )
    if top:
        rows.append("")
        rows.append("top partitions: " + ", ".join(str(s.index) for s in top))
    return "\n".join(rows) + "\n"
