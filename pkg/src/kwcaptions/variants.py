"""The four caption designs.

``standard``
    the input, normalized.
``kw``
    full captions with every keyword colored.
``timedkw``
    only the keywords, each shown from the moment it is spoken.
``timedhl``
    full captions split at keyword onsets, so a keyword turns colored when it
    is spoken and stays colored until its cue ends.

Timed keywords shown for less than ``min_display_ms`` are extended by
``extension_ms``, but not past the start of the next caption.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Hashable, Iterable, Sequence

from .alignment import WordTiming
from .errors import MissingTiming
from .lexicon import KeywordAnnotation
from .srt_model import Cue, Document, Position, StyledLine, normalize_color, tokenize

__all__ = [
    "Variant",
    "VariantParams",
    "gen_standard",
    "gen_keyword_highlights",
    "gen_timed_keywords",
    "gen_timed_keyword_highlights",
    "plan_timed_highlights",
    "resolve_overlaps",
    "generate",
]


class Variant(enum.Enum):
    STANDARD = "standard"
    KEYWORD_HIGHLIGHTS = "kw"
    TIMED_KEYWORDS = "timedkw"
    TIMED_KEYWORD_HIGHLIGHTS = "timedhl"

    @property
    def suffix(self) -> str:
        return f".{self.value}.srt"

    @property
    def timed(self) -> bool:
        return self in (Variant.TIMED_KEYWORDS, Variant.TIMED_KEYWORD_HIGHLIGHTS)


@dataclass(frozen=True)
class VariantParams:
    highlight_color: str = "#FFFF00"
    min_display_ms: int = 500
    extension_ms: int = 300
    variant: Variant = Variant.STANDARD

    def __post_init__(self) -> None:
        object.__setattr__(self, "highlight_color", normalize_color(self.highlight_color))
        if self.min_display_ms <= 0:
            raise ValueError(f"min_display_ms must be positive, got {self.min_display_ms}")
        if self.extension_ms < 0:
            raise ValueError(f"extension_ms must be non-negative, got {self.extension_ms}")


def _highlight(cue: Cue, positions: Iterable[Position], color: str) -> tuple[StyledLine, ...]:
    by_line: dict[int, list[tuple[int, int]]] = {}
    for pos in positions:
        by_line.setdefault(pos.line_index, []).append((pos.start, pos.end))
    return tuple(line.restyle(by_line.get(li, ()), color) for li, line in enumerate(cue.lines))


def _next_start(doc: Document, ci: int) -> int | None:
    return doc.cues[ci + 1].start if ci + 1 < len(doc.cues) else None


def _extended_end(offset: int, residence: int, next_start: int | None, p: VariantParams) -> int:
    """End time after the short-display extension; never earlier than ``offset``."""
    if residence >= p.min_display_ms:
        return offset
    end = offset + p.extension_ms
    if next_start is not None:
        end = min(end, next_start)
    return max(offset, end)


def gen_standard(doc: Document) -> Document:
    return doc.renumbered()


def gen_keyword_highlights(
    doc: Document, ann: KeywordAnnotation, p: VariantParams = VariantParams()
) -> Document:
    cues = [
        replace(cue, lines=_highlight(cue, ann.in_cue(ci), p.highlight_color))
        for ci, cue in enumerate(doc.cues)
    ]
    return Document(tuple(cues)).renumbered()


def resolve_overlaps(cues: Sequence[Cue], sources: Sequence[Hashable] | None = None) -> list[Cue]:
    """Truncate each cue at the start of the next overlapping cue from another source.

    ``sources`` tags each cue with the source cue it came from (default: all
    distinct); overlaps between cues with the same tag are left alone. Cues
    cut down to zero length are dropped.
    """
    if sources is None:
        sources = range(len(cues))
    if len(sources) != len(cues):
        raise ValueError("sources must be parallel to cues")
    for prev, cur in zip(cues, cues[1:]):
        if cur.start < prev.start:
            raise ValueError("cues must be sorted by start time")
    out = []
    for i, cue in enumerate(cues):
        end = cue.end
        for j in range(i + 1, len(cues)):
            if cues[j].start >= end:
                break
            if sources[j] != sources[i]:
                end = cues[j].start
                break
        if end > cue.start:
            out.append(cue if end == cue.end else replace(cue, end=end))
    return out


def _span(timing: WordTiming, pos: Position):
    span = timing.get(pos)
    if span is None:
        raise MissingTiming(pos)
    return span


def gen_timed_keywords(
    doc: Document,
    ann: KeywordAnnotation,
    timing: WordTiming,
    p: VariantParams = VariantParams(),
) -> Document:
    """Keyword-only captions, one cue per keyword (or per run of overlapping keywords)."""
    surfaces = {t.position: t.surface for t in tokenize(doc) if t.position in ann}
    groups: list[list] = []  # [start, end, source, words]
    for ci in range(len(doc.cues)):
        next_start = _next_start(doc, ci)
        current = None
        for pos in ann.in_cue(ci):
            span = _span(timing, pos)
            end = _extended_end(span.offset_ms, span.duration, next_start, p)
            if current is not None and span.onset_ms < current[1]:
                current[1] = max(current[1], end)
                current[3].append(surfaces[pos])
            else:
                current = [span.onset_ms, end, ci, [surfaces[pos]]]
                groups.append(current)

    groups.sort(key=lambda g: g[0])
    # Groups from different sources starting on the same millisecond would be
    # truncated to nothing; show them together instead.
    merged: list[list] = []
    for g in groups:
        if merged and merged[-1][0] == g[0]:
            merged[-1][1] = max(merged[-1][1], g[1])
            merged[-1][3].extend(g[3])
        else:
            merged.append(g)

    cues = [
        Cue(1, start, end, (StyledLine.plain(" ".join(words)),)) for start, end, _, words in merged
    ]
    resolved = resolve_overlaps(cues, [g[2] for g in merged])
    return Document.from_cues(resolved)


def plan_timed_highlights(
    doc: Document,
    ann: KeywordAnnotation,
    timing: WordTiming,
    p: VariantParams = VariantParams(),
) -> list[list[Cue]]:
    """Sub-cues for every source cue before cross-cue overlaps are resolved.

    The sub-cues of one source cue tile ``[cue.start, end)`` where ``end`` is
    the cue end, possibly pushed out by the short-display extension.
    """
    plan = []
    for ci, cue in enumerate(doc.cues):
        positions = ann.in_cue(ci)
        if not positions:
            plan.append([cue])
            continue
        onsets = {
            pos: min(max(_span(timing, pos).onset_ms, cue.start), cue.end - 1) for pos in positions
        }
        last = max(onsets.values())
        end = _extended_end(cue.end, cue.end - last, _next_start(doc, ci), p)
        cuts = sorted(set(onsets.values()) | {cue.start})
        subs = []
        for a, b in zip(cuts, cuts[1:] + [end]):
            lit = [pos for pos in positions if onsets[pos] <= a]
            subs.append(Cue(cue.index, a, b, _highlight(cue, lit, p.highlight_color)))
        plan.append(subs)
    return plan


def gen_timed_keyword_highlights(
    doc: Document,
    ann: KeywordAnnotation,
    timing: WordTiming,
    p: VariantParams = VariantParams(),
) -> Document:
    plan = plan_timed_highlights(doc, ann, timing, p)
    tagged = [(sub, ci) for ci, subs in enumerate(plan) for sub in subs]
    tagged.sort(key=lambda t: t[0].start)
    resolved = resolve_overlaps([t[0] for t in tagged], [t[1] for t in tagged])
    return Document.from_cues(resolved)


def generate(
    variant: Variant,
    doc: Document,
    ann: KeywordAnnotation,
    timing: WordTiming | None = None,
    p: VariantParams = VariantParams(),
) -> Document:
    if variant is Variant.STANDARD:
        return gen_standard(doc)
    if variant is Variant.KEYWORD_HIGHLIGHTS:
        return gen_keyword_highlights(doc, ann, p)
    if timing is None:
        raise ValueError(f"{variant.value} needs word timing")
    if variant is Variant.TIMED_KEYWORDS:
        return gen_timed_keywords(doc, ann, timing, p)
    return gen_timed_keyword_highlights(doc, ann, timing, p)
