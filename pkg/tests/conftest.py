from __future__ import annotations

import csv
import re
from pathlib import Path

import pytest

from kwcaptions.lexicon import build_lexicon
from kwcaptions.srt_model import Cue, Document, StyledLine, TokenKind, tokenize

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = sorted((FIXTURES / "corpus").glob("*.srt"))

RANK = {"A1": 1, "A2": 2, "B1": 3, "B2": 4, "C1": 5, "C2": 6}

_criteria: dict[int, tuple[str, str, str]] = {}


def read_fixture(path: Path) -> str:
    return path.read_bytes().decode("utf-8")


def make_doc(*cues: tuple[int, int, str]) -> Document:
    """Document from ``(start, end, text)`` triples; text lines split on newlines."""
    return Document(
        tuple(
            Cue(i, start, end, tuple(StyledLine.plain(t) for t in text.split("\n")))
            for i, (start, end, text) in enumerate(cues, 1)
        )
    )


def oracle_levels() -> dict[str, int]:
    """Read the fixture lists with csv and plain string handling only."""
    levels: dict[str, int] = {}

    def put(form, level):
        form = form.strip().lower().replace("’", "'")
        levels[form] = min(levels.get(form, 99), RANK[level.strip().upper()])

    family: dict[str, int] = {}
    head = None
    for line in (FIXTURES / "families.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        if line[0].isspace():
            family[line.strip()] = head
        else:
            name, lv = line.split(",")
            head = RANK[lv]
            family[name] = head
    with open(FIXTURES / "graded.csv", newline="") as fh:
        for row in csv.reader(fh):
            if row and not row[0].startswith("#") and row != ["form", "level"]:
                put(*row)
    for form, lv in family.items():
        levels.setdefault(form, lv)
    return levels


def brute_force_keywords(doc, threshold: str = "B2"):
    """Keyword positions of ``doc`` under the fixture lists, classified by hand."""
    levels = oracle_levels()
    never = set()
    for line in (FIXTURES / "overrides.csv").read_text().splitlines()[1:]:
        cells = line.split(",")
        if cells[1] == "force_level":
            levels[cells[0]] = RANK[cells[2]]
        else:
            never.add(cells[0])
    out = set()
    for tok in tokenize(doc):
        if tok.kind is not TokenKind.WORD or re.search(r"\d", tok.surface):
            continue
        form = tok.surface.lower().replace("\u2019", "'")
        if form not in never and levels.get(form, 99) >= RANK[threshold]:
            out.add(tok.position)
    return out


@pytest.fixture(scope="session")
def lexicon():
    return build_lexicon(
        FIXTURES / "graded.csv", [FIXTURES / "families.txt"], FIXTURES / "overrides.csv"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    if report.failed:
        message = (
            str(report.longrepr.reprcrash.message) if hasattr(report.longrepr, "reprcrash") else ""
        )
        _criteria[number] = (title, "FAIL", message.splitlines()[0] if message else "")
    elif report.when == "call" and number not in _criteria:
        _criteria[number] = (title, "PASS", "")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status, detail = _criteria[number]
        line = f"[{status}] criterion {number}: {title}"
        terminalreporter.write_line(line + (f" -- {detail}" if detail else ""))
