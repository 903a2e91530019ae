"""Word-level timing for cue text.

Times come from forced-alignment output (the JSON a Gentle server returns) when
available. Tokens the aligner missed are interpolated between their aligned
neighbours, and cues with no usable alignment at all are split proportionally
to word length.
"""

from __future__ import annotations

import enum
import json
import math
import re
from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterator, Mapping, Sequence

from .errors import MalformedAlignment
from .srt_model import Cue, Document, Position, Token, TokenKind, normalize_form, tokenize

__all__ = [
    "AlignmentStatus",
    "AlignedWord",
    "TimingSource",
    "TimedSpan",
    "WordTiming",
    "parse_alignment",
    "map_alignment",
    "proportional_timing",
    "seconds_to_ms",
    "split_span",
]

DEFAULT_WINDOW = 10
DEFAULT_MIN_MATCH_RATIO = 0.2
DEFAULT_SLACK_MS = 1000


class AlignmentStatus(enum.Enum):
    SUCCESS = "success"
    NOT_FOUND_IN_AUDIO = "not-found-in-audio"


@dataclass(frozen=True)
class AlignedWord:
    word: str
    start_s: float | None
    end_s: float | None
    status: AlignmentStatus = AlignmentStatus.SUCCESS

    @property
    def found(self) -> bool:
        return self.status is AlignmentStatus.SUCCESS


class TimingSource(enum.Enum):
    ALIGNED = "aligned"
    INTERPOLATED = "interpolated"
    PROPORTIONAL = "proportional"


@dataclass(frozen=True)
class TimedSpan:
    onset_ms: int
    offset_ms: int
    source: TimingSource

    @property
    def duration(self) -> int:
        return self.offset_ms - self.onset_ms


@dataclass(frozen=True)
class WordTiming:
    """Onset/offset per Word token position."""

    spans: Mapping[Position, TimedSpan]

    def __getitem__(self, position: Position) -> TimedSpan:
        return self.spans[position]

    def __contains__(self, position: object) -> bool:
        return position in self.spans

    def __len__(self) -> int:
        return len(self.spans)

    def __iter__(self) -> Iterator[Position]:
        return iter(self.spans)

    def get(self, position: Position) -> TimedSpan | None:
        return self.spans.get(position)

    def items(self):
        return self.spans.items()

    def source_counts(self) -> dict[TimingSource, int]:
        counts = dict.fromkeys(TimingSource, 0)
        for span in self.spans.values():
            counts[span.source] += 1
        return counts


# --------------------------------------------------------------------------
# Alignment JSON
# --------------------------------------------------------------------------


def _seconds(value: object, field: str, index: int) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise MalformedAlignment(f"{field!r} must be a finite number", index)
    return float(value)


def parse_alignment(json_text: str) -> list[AlignedWord]:
    try:
        data = json.loads(json_text)
    except json.JSONDecodeError as exc:
        raise MalformedAlignment(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("words"), list):
        raise MalformedAlignment("expected an object with a 'words' array")

    words = []
    for i, item in enumerate(data["words"]):
        if not isinstance(item, dict):
            raise MalformedAlignment("entry is not an object", i)
        word, case = item.get("word"), item.get("case")
        if not isinstance(word, str):
            raise MalformedAlignment("'word' must be a string", i)
        try:
            status = AlignmentStatus(case)
        except ValueError:
            raise MalformedAlignment(f"unknown case {case!r}", i) from None
        if status is AlignmentStatus.NOT_FOUND_IN_AUDIO:
            words.append(AlignedWord(word, None, None, status))
            continue
        start = _seconds(item.get("start"), "start", i)
        end = _seconds(item.get("end"), "end", i)
        if not 0 <= start < end:
            raise MalformedAlignment(f"need 0 <= start < end, got {start}..{end}", i)
        words.append(AlignedWord(word, start, end, status))
    return words


def seconds_to_ms(seconds: float) -> int:
    """Convert seconds to integer milliseconds, rounding half up."""
    return int((Decimal(repr(seconds)) * 1000).quantize(Decimal(1), rounding=ROUND_HALF_UP))


# --------------------------------------------------------------------------
# Timing
# --------------------------------------------------------------------------


def split_span(start: int, end: int, weights: Sequence[int]) -> list[tuple[int, int]]:
    """Partition ``[start, end)`` into consecutive pieces proportional to ``weights``.

    Boundaries are floored, so rounding remainders land on the last piece.
    Every piece gets at least 1 ms; if the span is shorter than the number of
    pieces it is stretched to fit.
    """
    n = len(weights)
    if n == 0:
        return []
    end = max(end, start + n)
    total = sum(weights)
    span = end - start
    cuts = [start]
    acc = 0
    for w in weights[:-1]:
        acc += w
        cuts.append(start + (span * acc) // total if total else start + (span * len(cuts)) // n)
    cuts.append(end)
    for k in range(1, n):
        cuts[k] = max(cuts[k], cuts[k - 1] + 1)
    for k in range(n - 1, 0, -1):
        cuts[k] = min(cuts[k], cuts[k + 1] - 1)
    return list(zip(cuts, cuts[1:]))


def _words_by_cue(doc: Document) -> list[list[Token]]:
    grouped: list[list[Token]] = [[] for _ in doc.cues]
    for tok in tokenize(doc):
        if tok.kind is TokenKind.WORD:
            grouped[tok.cue_index].append(tok)
    return grouped


def _proportional(cue: Cue, words: list[Token]) -> dict[Position, TimedSpan]:
    pieces = split_span(cue.start, cue.end, [len(w.surface) for w in words])
    return {
        w.position: TimedSpan(a, b, TimingSource.PROPORTIONAL) for w, (a, b) in zip(words, pieces)
    }


def proportional_timing(doc: Document) -> WordTiming:
    """Split every cue among its words by character length; punctuation gets no time."""
    spans: dict[Position, TimedSpan] = {}
    for cue, words in zip(doc.cues, _words_by_cue(doc)):
        spans.update(_proportional(cue, words))
    return WordTiming(spans)


def _lcs_pairs(a: Sequence[str], b: Sequence[str]) -> list[tuple[int, int]]:
    """Longest common subsequence as index pairs (Hunt-Szymanski via LIS)."""
    where: dict[str, list[int]] = defaultdict(list)
    for j, w in enumerate(b):
        where[w].append(j)
    tails: list[int] = []
    tail_node: list[int] = []
    nodes: list[tuple[int, int, int]] = []
    for i, w in enumerate(a):
        for j in reversed(where.get(w, ())):
            k = bisect_left(tails, j)
            nodes.append((i, j, tail_node[k - 1] if k else -1))
            if k == len(tails):
                tails.append(j)
                tail_node.append(len(nodes) - 1)
            else:
                tails[k] = j
                tail_node[k] = len(nodes) - 1
    pairs = []
    node = tail_node[-1] if tail_node else -1
    while node >= 0:
        i, j, node = nodes[node]
        pairs.append((i, j))
    return pairs[::-1]


_EDGE_PUNCT = re.compile(r"^\W+|\W+$")


def _match(a: Sequence[str], b: Sequence[str], window: int) -> dict[int, int]:
    """LCS matching, then a ±window search for tokens the LCS left out (swapped lines)."""
    pairs = _lcs_pairs(a, b)
    matched = dict(pairs)
    used = {j for _, j in pairs}
    anchors = [i for i, _ in pairs]
    last: tuple[int, int] | None = None
    for i in range(len(a)):
        if i in matched:
            last = (i, matched[i])
            continue
        if last is not None:
            center = last[1] + (i - last[0])
        else:
            k = bisect_left(anchors, i)
            center = matched[anchors[k]] - (anchors[k] - i) if k < len(anchors) else i
        for d in range(window + 1):
            hit = next(
                (
                    j
                    for j in ((center - d, center + d) if d else (center,))
                    if 0 <= j < len(b) and j not in used and b[j] == a[i]
                ),
                None,
            )
            if hit is not None:
                matched[i] = hit
                used.add(hit)
                last = (i, hit)
                break
    return matched


def _fill_cue(
    cue: Cue, words: list[Token], anchored: list[tuple[int, int] | None]
) -> dict[Position, TimedSpan]:
    spans: dict[Position, TimedSpan] = {}
    k = 0
    while k < len(words):
        if anchored[k] is not None:
            on, off = anchored[k]
            spans[words[k].position] = TimedSpan(on, off, TimingSource.ALIGNED)
            k += 1
            continue
        run_end = k
        while run_end < len(words) and anchored[run_end] is None:
            run_end += 1
        lo = anchored[k - 1][1] if k > 0 else cue.start
        hi = anchored[run_end][0] if run_end < len(words) else cue.end
        run = words[k:run_end]
        for w, (a, b) in zip(run, split_span(lo, hi, [len(t.surface) for t in run])):
            spans[w.position] = TimedSpan(a, b, TimingSource.INTERPOLATED)
        k = run_end
    return spans


def _clamp(cue: Cue, words: list[Token], spans: dict[Position, TimedSpan], slack: int) -> None:
    lo, hi = max(0, cue.start - slack), cue.end + slack
    prev_onset = lo
    for w in words:
        span = spans[w.position]
        onset = max(min(max(span.onset_ms, lo), hi - 1), prev_onset)
        # An onset pushed later keeps its duration where the slack allows.
        duration = max(1, span.offset_ms - span.onset_ms)
        offset = max(min(max(span.offset_ms, onset + duration), hi), onset + 1)
        prev_onset = onset
        spans[w.position] = TimedSpan(onset, offset, span.source)


def map_alignment(
    doc: Document,
    aligned: Sequence[AlignedWord],
    *,
    window: int = DEFAULT_WINDOW,
    min_match_ratio: float = DEFAULT_MIN_MATCH_RATIO,
    slack_ms: int = DEFAULT_SLACK_MS,
) -> WordTiming:
    """Attach aligner times to the document's Word tokens.

    Never fails: if fewer than ``min_match_ratio`` of the tokens can be matched
    the alignment is ignored and :func:`proportional_timing` is returned.
    Aligned times further than ``slack_ms`` outside their cue are discarded.
    """
    by_cue = _words_by_cue(doc)
    words = [w for ws in by_cue for w in ws]
    if not words:
        return WordTiming({})
    a = [w.normalized for w in words]
    b = [_EDGE_PUNCT.sub("", normalize_form(x.word)) for x in aligned]
    matched = _match(a, b, window)
    if len(matched) < min_match_ratio * len(words) or not matched:
        return proportional_timing(doc)

    spans: dict[Position, TimedSpan] = {}
    flat = 0
    for cue, cue_words in zip(doc.cues, by_cue):
        anchored: list[tuple[int, int] | None] = []
        for _ in cue_words:
            j = matched.get(flat)
            flat += 1
            hit = aligned[j] if j is not None else None
            if hit is None or not hit.found:
                anchored.append(None)
                continue
            on, off = seconds_to_ms(hit.start_s), seconds_to_ms(hit.end_s)
            if off < cue.start - slack_ms or on > cue.end + slack_ms:
                anchored.append(None)
            else:
                anchored.append((on, off))
        if any(x is not None for x in anchored):
            cue_spans = _fill_cue(cue, cue_words, anchored)
        else:
            cue_spans = _proportional(cue, cue_words)
        _clamp(cue, cue_words, cue_spans, slack_ms)
        spans.update(cue_spans)
    return WordTiming(spans)
