"""Graded vocabulary lists and keyword classification.

Keywords are found the reverse way round: a word is a keyword unless it is
listed at a level below the keyword threshold. Levels come from three kinds of
input file:

graded list
    ``form,level`` per line, e.g. ``acceptance,C1``.
family list
    an unindented ``head,level`` line followed by indented member forms; every
    member inherits the head's level unless the graded list has the exact form.
override file
    ``form,directive[,level]`` with directives ``force_level`` (needs a level),
    ``force_keyword``, ``force_non_keyword`` and ``proper_name``.

Blank lines and lines starting with ``#`` are ignored everywhere.
"""

from __future__ import annotations

import csv
import enum
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from os import PathLike
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import ConflictingOverride, MalformedWordlistLine
from .srt_model import Document, Position, Token, TokenKind, normalize_form, tokenize

__all__ = [
    "CefrLevel",
    "Source",
    "Directive",
    "Entry",
    "Lexicon",
    "KeywordAnnotation",
    "read_graded",
    "read_families",
    "read_overrides",
    "build_lexicon",
    "is_keyword",
    "annotate",
    "detect_proper_names",
]


class CefrLevel(enum.Enum):
    A1 = "A1"
    A2 = "A2"
    B1 = "B1"
    B2 = "B2"
    C1 = "C1"
    C2 = "C2"
    UNKNOWN = "Unknown"

    @property
    def rank(self) -> int | None:
        """1..6 for A1..C2; ``None`` for UNKNOWN, which has no place in the order."""
        return None if self is CefrLevel.UNKNOWN else _RANKS[self]

    @classmethod
    def parse(cls, text: str) -> CefrLevel:
        key = text.strip().upper()
        for level in cls:
            if level.value.upper() == key and level is not cls.UNKNOWN:
                return level
        raise ValueError(f"not a CEFR level: {text!r}")


_RANKS = {lvl: i for i, lvl in enumerate(list(CefrLevel)[:6], 1)}
GRADED_LEVELS = tuple(list(CefrLevel)[:6])


class Source(enum.Enum):
    OXFORD = "oxford"
    FAMILY = "family"
    OVERRIDE = "override"


class Directive(enum.Enum):
    FORCE_LEVEL = "force_level"
    FORCE_KEYWORD = "force_keyword"
    FORCE_NON_KEYWORD = "force_non_keyword"
    PROPER_NAME = "proper_name"


@dataclass(frozen=True)
class Entry:
    level: CefrLevel
    source: Source


@dataclass(frozen=True)
class Lexicon:
    entries: Mapping[str, Entry]
    proper_names: frozenset[str] = frozenset()
    directives: Mapping[str, Directive] = field(default_factory=dict)
    threshold: CefrLevel = CefrLevel.B2

    def __post_init__(self) -> None:
        if self.threshold.rank is None or self.threshold.rank < 2:
            raise ValueError(f"keyword threshold must be A2..C2, got {self.threshold.value}")
        object.__setattr__(self, "proper_names", frozenset(self.proper_names))

    def level_of(self, form: str) -> CefrLevel:
        entry = self.entries.get(normalize_form(form))
        return entry.level if entry else CefrLevel.UNKNOWN

    def with_threshold(self, threshold: CefrLevel) -> Lexicon:
        return replace(self, threshold=threshold)

    def with_proper_names(self, names: Iterable[str]) -> Lexicon:
        return replace(self, proper_names=self.proper_names | {normalize_form(n) for n in names})

    def is_keyword_form(self, form: str) -> bool:
        """Classify a bare word form (no digit/kind checks)."""
        form = normalize_form(form)
        directive = self.directives.get(form)
        if directive is Directive.FORCE_KEYWORD:
            return True
        if directive in (Directive.FORCE_NON_KEYWORD, Directive.PROPER_NAME):
            return False
        entry = self.entries.get(form)
        if entry is not None and entry.source is Source.OVERRIDE:
            return entry.level.rank >= self.threshold.rank
        if form in self.proper_names:
            return False
        if entry is None:
            return True
        return entry.level.rank >= self.threshold.rank

    def level_counts(self) -> dict[tuple[CefrLevel, Source], int]:
        return dict(Counter((e.level, e.source) for e in self.entries.values()))


# --------------------------------------------------------------------------
# File readers
# --------------------------------------------------------------------------


def _rows(text: str) -> Iterator[tuple[int, str, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        row = next(csv.reader([raw.strip()]), [])
        yield lineno, raw, [cell.strip() for cell in row]


def _level(name: str, lineno: int, cell: str) -> CefrLevel:
    try:
        return CefrLevel.parse(cell)
    except ValueError:
        raise MalformedWordlistLine(name, lineno, f"invalid level {cell!r}") from None


def _form(name: str, lineno: int, cell: str) -> str:
    form = normalize_form(cell)
    if not form or any(c.isspace() for c in form):
        raise MalformedWordlistLine(name, lineno, f"invalid word form {cell!r}")
    return form


def _keep_lowest(table: dict[str, CefrLevel], form: str, level: CefrLevel) -> None:
    old = table.get(form)
    if old is None or level.rank < old.rank:
        table[form] = level


def read_graded(text: str, name: str = "<graded>") -> dict[str, CefrLevel]:
    """Parse a graded list. A form listed at several levels keeps the lowest."""
    table: dict[str, CefrLevel] = {}
    first = True
    for lineno, _, row in _rows(text):
        if first and [c.lower() for c in row] == ["form", "level"]:
            first = False
            continue
        first = False
        if len(row) != 2:
            raise MalformedWordlistLine(name, lineno, "expected 'form,level'")
        _keep_lowest(table, _form(name, lineno, row[0]), _level(name, lineno, row[1]))
    return table


def read_families(text: str, name: str = "<families>") -> dict[str, CefrLevel]:
    """Parse a family list into ``form -> level`` for heads and members."""
    table: dict[str, CefrLevel] = {}
    head_level: CefrLevel | None = None
    for lineno, raw, row in _rows(text):
        if raw[0].isspace():
            if head_level is None:
                raise MalformedWordlistLine(name, lineno, "member line before any head")
            if len(row) != 1:
                raise MalformedWordlistLine(name, lineno, "member line must hold one form")
            _keep_lowest(table, _form(name, lineno, row[0]), head_level)
        else:
            if len(row) != 2:
                raise MalformedWordlistLine(name, lineno, "expected family head 'head,level'")
            head_level = _level(name, lineno, row[1])
            _keep_lowest(table, _form(name, lineno, row[0]), head_level)
    return table


def read_overrides(
    text: str, name: str = "<overrides>"
) -> dict[str, tuple[Directive, CefrLevel | None]]:
    table: dict[str, tuple[Directive, CefrLevel | None]] = {}
    first = True
    for lineno, _, row in _rows(text):
        if first and [c.lower() for c in row[:2]] == ["form", "directive"]:
            first = False
            continue
        first = False
        if len(row) not in (2, 3):
            raise MalformedWordlistLine(name, lineno, "expected 'form,directive[,level]'")
        form = _form(name, lineno, row[0])
        try:
            directive = Directive(row[1].lower())
        except ValueError:
            raise MalformedWordlistLine(name, lineno, f"unknown directive {row[1]!r}") from None
        has_level = len(row) == 3 and row[2] != ""
        if directive is Directive.FORCE_LEVEL and not has_level:
            raise MalformedWordlistLine(name, lineno, "force_level needs a level")
        if directive is not Directive.FORCE_LEVEL and has_level:
            raise MalformedWordlistLine(name, lineno, f"{directive.value} takes no level")
        value = (directive, _level(name, lineno, row[2]) if has_level else None)
        if form in table and table[form] != value:
            raise ConflictingOverride(name, lineno, form)
        table[form] = value
    return table


def _read_text(path: str | PathLike) -> str:
    return Path(path).read_text(encoding="utf-8-sig")


def build_lexicon(
    graded_list: str | PathLike,
    family_lists: Iterable[str | PathLike] = (),
    overrides: str | PathLike | None = None,
    threshold: CefrLevel = CefrLevel.B2,
) -> Lexicon:
    """Merge wordlist files into a :class:`Lexicon`.

    Precedence per form: override ``force_level`` > exact graded entry >
    family membership. Raises OSError for unreadable files.
    """
    graded = read_graded(_read_text(graded_list), str(graded_list))
    family: dict[str, CefrLevel] = {}
    for path in family_lists:
        for form, level in read_families(_read_text(path), str(path)).items():
            _keep_lowest(family, form, level)
    over = read_overrides(_read_text(overrides), str(overrides)) if overrides else {}
    return merge_lexicon(graded, family, over, threshold)


def merge_lexicon(
    graded: Mapping[str, CefrLevel],
    family: Mapping[str, CefrLevel] | None = None,
    overrides: Mapping[str, tuple[Directive, CefrLevel | None]] | None = None,
    threshold: CefrLevel = CefrLevel.B2,
) -> Lexicon:
    entries: dict[str, Entry] = {f: Entry(lv, Source.FAMILY) for f, lv in (family or {}).items()}
    entries.update((f, Entry(lv, Source.OXFORD)) for f, lv in graded.items())
    directives: dict[str, Directive] = {}
    for form, (directive, level) in (overrides or {}).items():
        if directive is Directive.FORCE_LEVEL:
            entries[form] = Entry(level, Source.OVERRIDE)
        else:
            directives[form] = directive
    return Lexicon(dict(sorted(entries.items())), directives=directives, threshold=threshold)


# --------------------------------------------------------------------------
# Classification
# --------------------------------------------------------------------------


def is_keyword(lex: Lexicon, token: Token) -> bool:
    if token.kind is not TokenKind.WORD or token.has_digit:
        return False
    return lex.is_keyword_form(token.normalized)


@dataclass(frozen=True)
class KeywordAnnotation:
    """Keyword token positions of one document plus per-cue counts."""

    keywords: frozenset[Position]
    counts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.keywords)

    def __contains__(self, position: object) -> bool:
        return position in self.keywords

    def in_cue(self, cue_index: int) -> list[Position]:
        return sorted(p for p in self.keywords if p.cue_index == cue_index)

    @classmethod
    def empty(cls, doc: Document) -> KeywordAnnotation:
        return cls(frozenset(), (0,) * len(doc.cues))

    @classmethod
    def from_positions(cls, doc: Document, positions: Iterable[Position]) -> KeywordAnnotation:
        keywords = frozenset(positions)
        counts = [0] * len(doc.cues)
        for pos in keywords:
            counts[pos.cue_index] += 1
        return cls(keywords, tuple(counts))


def annotate(lex: Lexicon, doc: Document) -> KeywordAnnotation:
    return KeywordAnnotation.from_positions(
        doc, (tok.position for tok in tokenize(doc) if is_keyword(lex, tok))
    )


_SENTENCE_END = set(".!?\u2026")


def detect_proper_names(doc: Document, lex: Lexicon) -> frozenset[str]:
    """Guess character and place names.

    A form qualifies when it is capitalized at every occurrence, appears at
    least once away from a sentence start, and has no wordlist entry. A cue
    start, a speaker dash, a sound description and ``.!?`` all start a new
    sentence.
    """
    always_capital: dict[str, bool] = defaultdict(lambda: True)
    mid_sentence: set[str] = set()
    by_cue: dict[int, list[Token]] = defaultdict(list)
    for tok in tokenize(doc):
        by_cue[tok.cue_index].append(tok)

    for tokens in by_cue.values():
        at_start = True
        for tok in tokens:
            if tok.kind is TokenKind.WORD:
                if not tok.has_digit:
                    form = tok.normalized
                    always_capital[form] &= tok.surface[0].isupper()
                    if not at_start:
                        mid_sentence.add(form)
                at_start = False
            elif tok.kind is TokenKind.PUNCTUATION:
                if _SENTENCE_END & set(tok.surface):
                    at_start = True
            else:
                at_start = True

    return frozenset(
        form
        for form, capital in always_capital.items()
        if capital and form in mid_sentence and form not in lex.entries
    )
