"""SubRip documents: parsing, serialization, styled text and tokenization.

Only the ``<i>``, ``<b>`` and ``<font color="#RRGGBB">`` tags are interpreted.
Anything else that looks like markup (``<u>``, ``{\\an8}``, a ``<font>`` with
other attributes, an unclosed ``<i>``) is kept as literal text so that nothing
in the source is silently lost.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, NamedTuple

from .errors import EmptyDocument, MalformedTimestamp

__all__ = [
    "Style",
    "PLAIN",
    "Segment",
    "StyledLine",
    "Cue",
    "Document",
    "TokenKind",
    "Position",
    "Token",
    "parse_timestamp",
    "format_timestamp",
    "parse_markup",
    "strip_markup",
    "parse_srt",
    "serialize_srt",
    "tokenize",
    "tokenize_line",
    "normalize_form",
]


# --------------------------------------------------------------------------
# Timestamps
# --------------------------------------------------------------------------

_TS = r"(\d+):(\d{1,2}):(\d{1,2})[,.](\d{1,3})"
_TS_RE = re.compile(rf"^\s*{_TS}\s*$")
_TIMING_RE = re.compile(rf"^\s*{_TS}\s*-->\s*{_TS}(?:\s.*)?$")


def _ms_from_groups(h: str, m: str, s: str, frac: str) -> int | None:
    minutes, seconds = int(m), int(s)
    if minutes >= 60 or seconds >= 60:
        return None
    return ((int(h) * 60 + minutes) * 60 + seconds) * 1000 + int(frac.ljust(3, "0"))


def parse_timestamp(value: str) -> int:
    """Parse ``HH:MM:SS,mmm`` into milliseconds.

    A ``.`` separator and short fractions (``,5`` == 500 ms) are tolerated.
    """
    m = _TS_RE.match(value)
    ms = _ms_from_groups(*m.groups()) if m else None
    if ms is None:
        raise ValueError(f"invalid timestamp: {value!r}")
    return ms


def format_timestamp(ms: int) -> str:
    if ms < 0:
        raise ValueError(f"negative timestamp: {ms}")
    seconds, millis = divmod(ms, 1000)
    minutes, seconds = divmod(seconds, 60)
    hours, minutes = divmod(minutes, 60)
    return f"{hours:02d}:{minutes:02d}:{seconds:02d},{millis:03d}"


# --------------------------------------------------------------------------
# Styled text
# --------------------------------------------------------------------------

_HEX_RE = re.compile(r"^#?([0-9a-fA-F]{6}|[0-9a-fA-F]{3})$")


def normalize_color(value: str) -> str:
    """Return ``value`` as ``#RRGGBB`` (upper case); raise ValueError otherwise."""
    m = _HEX_RE.match(value.strip())
    if not m:
        raise ValueError(f"not a hex RGB color: {value!r}")
    digits = m.group(1)
    if len(digits) == 3:
        digits = "".join(c * 2 for c in digits)
    return "#" + digits.upper()


@dataclass(frozen=True)
class Style:
    italic: bool = False
    bold: bool = False
    color: str | None = None

    def __post_init__(self) -> None:
        if self.color is not None:
            object.__setattr__(self, "color", normalize_color(self.color))


PLAIN = Style()


@dataclass(frozen=True)
class Segment:
    text: str
    style: Style = PLAIN


def _normalize_segments(segments: Iterable[Segment]) -> tuple[Segment, ...]:
    out: list[Segment] = []
    for seg in segments:
        if not seg.text:
            continue
        if out and out[-1].style == seg.style:
            out[-1] = Segment(out[-1].text + seg.text, seg.style)
        else:
            out.append(seg)
    return tuple(out)


@dataclass(frozen=True)
class StyledLine:
    """One visible line; adjacent segments with equal style are merged."""

    segments: tuple[Segment, ...]

    def __post_init__(self) -> None:
        segs = _normalize_segments(self.segments)
        for seg in segs:
            if "\n" in seg.text or "\r" in seg.text:
                raise ValueError("segment text may not contain line breaks")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def plain(cls, text: str) -> StyledLine:
        return cls((Segment(text),))

    @property
    def text(self) -> str:
        return "".join(seg.text for seg in self.segments)

    def restyle(self, spans: Iterable[tuple[int, int]], color: str) -> StyledLine:
        """Return a copy with the given character spans recolored."""
        cuts = sorted(spans)
        if not cuts:
            return self
        pieces: list[Segment] = []
        offset = 0
        for seg in self.segments:
            seg_start, seg_end = offset, offset + len(seg.text)
            bounds = {seg_start, seg_end}
            for a, b in cuts:
                if seg_start < a < seg_end:
                    bounds.add(a)
                if seg_start < b < seg_end:
                    bounds.add(b)
            edges = sorted(bounds)
            for a, b in zip(edges, edges[1:]):
                inside = any(ka <= a and b <= kb for ka, kb in cuts)
                style = replace(seg.style, color=color) if inside else seg.style
                pieces.append(Segment(seg.text[a - seg_start : b - seg_start], style))
            offset = seg_end
        return StyledLine(tuple(pieces))


@dataclass(frozen=True)
class Cue:
    index: int
    start: int
    end: int
    lines: tuple[StyledLine, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lines", tuple(self.lines))
        if self.index < 1:
            raise ValueError(f"cue index must be positive, got {self.index}")
        if self.start < 0:
            raise ValueError(f"cue start must be non-negative, got {self.start}")
        if self.end <= self.start:
            raise ValueError(f"cue {self.index}: end {self.end} not after start {self.start}")
        if not self.lines:
            raise ValueError(f"cue {self.index} has no lines")
        for line in self.lines:
            if not line.text.rstrip():
                raise ValueError(f"cue {self.index} has an empty line")

    @property
    def duration(self) -> int:
        return self.end - self.start

    @property
    def text(self) -> str:
        return "\n".join(line.text for line in self.lines)


@dataclass(frozen=True)
class Document:
    cues: tuple[Cue, ...]
    newline: str = "\n"
    had_bom: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "cues", tuple(self.cues))
        if self.newline not in ("\n", "\r\n"):
            raise ValueError(f"unsupported newline {self.newline!r}")
        for prev, cur in zip(self.cues, self.cues[1:]):
            if cur.start < prev.start:
                raise ValueError(f"cue {cur.index} starts before cue {prev.index}")
            if cur.index <= prev.index:
                raise ValueError(f"cue indices not increasing at {cur.index}")

    def __len__(self) -> int:
        return len(self.cues)

    def __iter__(self) -> Iterator[Cue]:
        return iter(self.cues)

    def renumbered(self) -> Document:
        """Indices 1..n, LF newlines, no BOM: the form :func:`serialize_srt` writes."""
        cues = tuple(replace(c, index=i) for i, c in enumerate(self.cues, 1))
        return Document(cues)

    @classmethod
    def from_cues(cls, cues: Iterable[Cue]) -> Document:
        """Build a document from cues in any order, sorting stably by start and renumbering."""
        ordered = sorted(cues, key=lambda c: c.start)
        return cls(tuple(replace(c, index=i) for i, c in enumerate(ordered, 1)))


# --------------------------------------------------------------------------
# Markup
# --------------------------------------------------------------------------

_TAG_RE = re.compile(r"<\s*(/?)\s*(i|b|font)\b([^<>]*)>", re.IGNORECASE)
_COLOR_ATTR_RE = re.compile(
    r"""^\s*color\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s"']+))\s*$""", re.IGNORECASE
)


@dataclass
class _Tag:
    kind: str
    closing: bool
    color: str | None
    raw: str
    partner: int | None = None


def _read_tag(m: re.Match) -> _Tag | None:
    closing, kind, attrs = m.group(1) == "/", m.group(2).lower(), m.group(3)
    color = None
    if closing or kind in ("i", "b"):
        if attrs.strip():
            return None
    else:
        am = _COLOR_ATTR_RE.match(attrs)
        if not am:
            return None
        try:
            color = normalize_color(next(g for g in am.groups() if g is not None))
        except ValueError:
            return None
    return _Tag(kind, closing, color, m.group(0))


def parse_markup(text: str) -> list[list[Segment]]:
    """Split markup ``text`` (possibly multi-line) into per-line segment lists.

    Tags are matched across line breaks; an unmatched open or close tag is
    literal text.
    """
    items: list[str | _Tag] = []
    pos = 0
    for m in _TAG_RE.finditer(text):
        tag = _read_tag(m)
        if tag is None:
            continue
        if m.start() > pos:
            items.append(text[pos : m.start()])
        items.append(tag)
        pos = m.end()
    if pos < len(text):
        items.append(text[pos:])

    stack: list[int] = []
    for i, item in enumerate(items):
        if not isinstance(item, _Tag):
            continue
        if not item.closing:
            stack.append(i)
            continue
        for depth in range(len(stack) - 1, -1, -1):
            opener = items[stack[depth]]
            if opener.kind == item.kind:
                opener.partner = i
                item.partner = stack.pop(depth)
                break

    lines: list[list[Segment]] = [[]]
    active: list[_Tag] = []

    def emit(chunk: str) -> None:
        style = Style(
            italic=any(t.kind == "i" for t in active),
            bold=any(t.kind == "b" for t in active),
            color=next((t.color for t in reversed(active) if t.kind == "font"), None),
        )
        first, *rest = chunk.split("\n")
        if first:
            lines[-1].append(Segment(first, style))
        for part in rest:
            lines.append([Segment(part, style)] if part else [])

    for item in items:
        if isinstance(item, str):
            emit(item)
        elif item.partner is None:
            emit(item.raw)
        elif item.closing:
            active.remove(items[item.partner])
        else:
            active.append(item)
    return lines


def strip_markup(text: str) -> str:
    return "\n".join("".join(s.text for s in line) for line in parse_markup(text))


def _render_segment(seg: Segment) -> str:
    out = seg.text
    if seg.style.italic:
        out = f"<i>{out}</i>"
    if seg.style.bold:
        out = f"<b>{out}</b>"
    if seg.style.color is not None:
        out = f'<font color="{seg.style.color}">{out}</font>'
    return out


def render_line(line: StyledLine) -> str:
    return "".join(_render_segment(seg) for seg in line.segments)


# --------------------------------------------------------------------------
# SubRip parsing and serialization
# --------------------------------------------------------------------------


def _split_blocks(lines: list[str]) -> Iterator[list[str]]:
    block: list[str] = []
    for line in lines:
        if line.strip():
            block.append(line)
        elif block:
            yield block
            block = []
    if block:
        yield block


def _split_run_on(block: list[str]) -> Iterator[list[str]]:
    # A missing blank line between cues shows up as "<digits>" + timing inside a block.
    start = 0
    for i in range(2, len(block)):
        if block[i - 1].strip().isdigit() and _TIMING_RE.match(block[i]) and i - 1 > start + 1:
            yield block[start : i - 1]
            start = i - 1
    yield block[start:]


def parse_srt(text: str) -> Document:
    """Parse SubRip ``text`` into a :class:`Document`.

    Cues are sorted by start time (stable); source indices are kept when they
    remain strictly increasing, otherwise cues are renumbered 1..n. Cues
    without visible text are dropped.
    """
    had_bom = text.startswith("\ufeff")
    if had_bom:
        text = text[1:]
    newline = "\r\n" if "\r\n" in text else "\n"
    raw_lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")

    parsed: list[tuple[int | None, int, int, tuple[StyledLine, ...]]] = []
    block_no = 0
    for outer in _split_blocks(raw_lines):
        for block in _split_run_on(outer):
            block_no += 1
            head = block[0].strip()
            if _TIMING_RE.match(block[0]):
                index, timing, body = None, block[0], block[1:]
            elif head.isdigit() and len(block) > 1:
                index, timing, body = int(head), block[1], block[2:]
            else:
                raise MalformedTimestamp(block_no, block[1] if head.isdigit() else block[0])
            m = _TIMING_RE.match(timing)
            groups = m.groups() if m else ()
            start = _ms_from_groups(*groups[:4]) if m else None
            end = _ms_from_groups(*groups[4:]) if m else None
            if start is None or end is None:
                raise MalformedTimestamp(block_no, timing)
            if end <= start:
                raise MalformedTimestamp(block_no, timing, "end not after start")
            styled = tuple(
                line
                for line in (StyledLine(tuple(segs)) for segs in parse_markup("\n".join(body)))
                if line.text.rstrip()
            )
            if styled:
                parsed.append((index if index else None, start, end, styled))

    if not parsed:
        raise EmptyDocument()
    parsed.sort(key=lambda p: p[1])
    indices = [p[0] for p in parsed]
    keep = all(i is not None for i in indices) and all(a < b for a, b in zip(indices, indices[1:]))
    cues = tuple(
        Cue(indices[n] if keep else n + 1, start, end, styled)
        for n, (_, start, end, styled) in enumerate(parsed)
    )
    return Document(cues, newline=newline, had_bom=had_bom)


def serialize_srt(doc: Document) -> str:
    """Render ``doc`` as SubRip text: LF newlines, indices 1..n, no BOM."""
    blocks = []
    for n, cue in enumerate(doc.cues, 1):
        body = "\n".join(render_line(line) for line in cue.lines)
        blocks.append(
            f"{n}\n{format_timestamp(cue.start)} --> {format_timestamp(cue.end)}\n{body}\n\n"
        )
    return "".join(blocks)


# --------------------------------------------------------------------------
# Tokens
# --------------------------------------------------------------------------


class TokenKind(enum.Enum):
    WORD = "word"
    PUNCTUATION = "punctuation"
    SOUND_DESCRIPTION = "sound"
    SPEAKER_LABEL = "speaker"


class Position(NamedTuple):
    """Location of a token: cue ordinal in ``Document.cues``, line, char span."""

    cue_index: int
    line_index: int
    start: int
    end: int


@dataclass(frozen=True)
class Token:
    cue_index: int
    line_index: int
    start: int
    end: int
    surface: str
    normalized: str
    kind: TokenKind

    @property
    def char_span(self) -> tuple[int, int]:
        return (self.start, self.end)

    @property
    def position(self) -> Position:
        return Position(self.cue_index, self.line_index, self.start, self.end)

    @property
    def has_digit(self) -> bool:
        return any(c.isdigit() for c in self.surface)


def normalize_form(text: str) -> str:
    return text.strip().lower().replace("\u2019", "'")


_FIXED_RE = re.compile(
    r"(?P<sound>\[[^\[\]\n]*\]|\([^()\n]*\))|(?P<markup><[^<>\n]*>|\{[^{}\n]*\})"
)
_SPEAKER_RE = re.compile(r"^\s*(-)(?=\s)")
_PIECE_RE = re.compile(r"(?P<word>[^\W_]+(?:['\u2019\-\u2010][^\W_]+)*)|(?P<punct>[^\w\s]+|_+)")


def tokenize_line(text: str, cue_index: int = 0, line_index: int = 0) -> list[Token]:
    """Tokenize one visible line.

    Bracketed or parenthesized spans become a single sound-description token,
    a leading ``-`` followed by whitespace is a speaker label, and everything
    else splits into words (with inner apostrophes and hyphens) and runs of
    punctuation. Leftover literal markup such as ``<u>`` is never a word.
    """

    def make(a: int, b: int, kind: TokenKind) -> Token:
        surface = text[a:b]
        return Token(cue_index, line_index, a, b, surface, normalize_form(surface), kind)

    fixed: list[Token] = []
    sm = _SPEAKER_RE.match(text)
    if sm:
        fixed.append(make(sm.start(1), sm.end(1), TokenKind.SPEAKER_LABEL))
    # Literal tag-like text (an unsupported or unclosed tag) is one punctuation token.
    for m in _FIXED_RE.finditer(text, sm.end() if sm else 0):
        kind = TokenKind.SOUND_DESCRIPTION if m.lastgroup == "sound" else TokenKind.PUNCTUATION
        fixed.append(make(m.start(), m.end(), kind))

    tokens: list[Token] = []
    pos = 0
    for tok in fixed + [None]:
        gap_end = tok.start if tok else len(text)
        for m in _PIECE_RE.finditer(text, pos, gap_end):
            kind = TokenKind.WORD if m.lastgroup == "word" else TokenKind.PUNCTUATION
            tokens.append(make(m.start(), m.end(), kind))
        if tok:
            tokens.append(tok)
            pos = tok.end
    return tokens


def tokenize(doc: Document) -> list[Token]:
    return [
        tok
        for ci, cue in enumerate(doc.cues)
        for li, line in enumerate(cue.lines)
        for tok in tokenize_line(line.text, ci, li)
    ]
