"""Exception hierarchy shared by the caption pipeline."""

from __future__ import annotations


class CaptionError(Exception):
    """Base class for all errors raised by kwcaptions."""


class SrtError(CaptionError, ValueError):
    """Input subtitle text could not be parsed."""


class MalformedTimestamp(SrtError):
    def __init__(self, block: int, line: str, reason: str = "unparseable timing line"):
        self.block = block
        self.line = line
        super().__init__(f"cue block {block}: {reason}: {line!r}")


class EmptyDocument(SrtError):
    def __init__(self) -> None:
        super().__init__("no cues found")


class WordlistError(CaptionError, ValueError):
    """A wordlist or override file is invalid."""


class MalformedWordlistLine(WordlistError):
    def __init__(self, path: str, lineno: int, reason: str):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {reason}")


class ConflictingOverride(WordlistError):
    def __init__(self, path: str, lineno: int, form: str):
        self.path = path
        self.lineno = lineno
        self.form = form
        super().__init__(f"{path}:{lineno}: conflicting override for {form!r}")


class MalformedAlignment(CaptionError, ValueError):
    def __init__(self, reason: str, word_index: int | None = None):
        self.word_index = word_index
        where = "" if word_index is None else f"word {word_index}: "
        super().__init__(f"{where}{reason}")


class MissingTiming(CaptionError, LookupError):
    def __init__(self, position):
        self.position = position
        super().__init__(f"no timing for keyword at {position}")


class InvalidPartitionCount(CaptionError, ValueError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"partition count must be >= 1, got {n}")
