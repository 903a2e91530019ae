from __future__ import annotations

import pytest
from conftest import FIXTURES, brute_force_keywords, make_doc, read_fixture

from kwcaptions.errors import ConflictingOverride, MalformedWordlistLine
from kwcaptions.lexicon import (
    CefrLevel,
    Directive,
    Source,
    annotate,
    build_lexicon,
    detect_proper_names,
    is_keyword,
    merge_lexicon,
    read_families,
    read_graded,
    read_overrides,
)
from kwcaptions.srt_model import TokenKind, parse_srt, tokenize, tokenize_line


def word(text):
    (tok,) = [t for t in tokenize_line(text) if t.kind is TokenKind.WORD]
    return tok


def test_accept_and_acceptance(lexicon):
    assert lexicon.level_of("accept") is CefrLevel.A1
    assert lexicon.level_of("acceptance") is CefrLevel.C1
    assert not is_keyword(lexicon, word("accept"))
    assert is_keyword(lexicon, word("acceptance"))


def test_exact_form_beats_family():
    lex = merge_lexicon(
        {"acceptance": CefrLevel.C1}, {"accept": CefrLevel.A1, "acceptance": CefrLevel.A1}
    )
    assert lex.entries["acceptance"].level is CefrLevel.C1
    assert lex.entries["acceptance"].source is Source.OXFORD
    assert lex.entries["accept"].source is Source.FAMILY


def test_family_members_get_head_level(lexicon):
    for form in ("walk", "walks", "walked", "walking"):
        assert lexicon.level_of(form) is CefrLevel.A1
    assert lexicon.level_of("slammed") is CefrLevel.B1


def test_unknown_word_is_keyword(lexicon):
    assert lexicon.level_of("zugzwang") is CefrLevel.UNKNOWN
    assert is_keyword(lexicon, word("zugzwang"))


def test_overrides(lexicon):
    assert not is_keyword(lexicon, word("serendipity"))
    assert not is_keyword(lexicon, word("Theo"))
    assert lexicon.level_of("mediator") is CefrLevel.C1
    assert lexicon.entries["mediator"].source is Source.OVERRIDE
    assert not is_keyword(lexicon, word("well-known"))


def test_override_dominates_every_threshold(lexicon):
    for level in (CefrLevel.A2, CefrLevel.B1, CefrLevel.B2, CefrLevel.C1, CefrLevel.C2):
        lex = lexicon.with_threshold(level)
        assert not lex.is_keyword_form("serendipity")
        assert not lex.is_keyword_form("theo")
    forced = merge_lexicon(
        {"cat": CefrLevel.A1}, overrides={"cat": (Directive.FORCE_KEYWORD, None)}
    )
    assert forced.is_keyword_form("cat")


def test_duplicate_form_keeps_lowest_level(lexicon):
    assert lexicon.level_of("fair") is CefrLevel.A2


def test_digits_and_non_words_never_keywords(lexicon):
    assert not is_keyword(lexicon, word("zugzwang9"))
    for tok in tokenize_line("- [zugzwang] (serendipitous)"):
        assert not is_keyword(lexicon, tok)


def test_case_and_apostrophe_insensitive(lexicon):
    assert lexicon.is_keyword_form("ACCEPTANCE")
    assert not is_keyword(lexicon, word("Don’t"))


def test_threshold_range():
    with pytest.raises(ValueError):
        merge_lexicon({}, threshold=CefrLevel.A1)
    with pytest.raises(ValueError):
        merge_lexicon({}, threshold=CefrLevel.UNKNOWN)


def test_lowered_threshold_makes_b1_keyword(lexicon):
    assert not lexicon.is_keyword_form("slam")
    assert lexicon.with_threshold(CefrLevel.B1).is_keyword_form("slam")


# --- readers ------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("cat,A1\ndog\n", 2),
        ("cat,A1\ndog,Z9\n", 2),
        ("form,level\n\n# c\ncat,A1,extra\n", 4),
        ("two words,A1\n", 1),
    ],
)
def test_malformed_graded_line(text, lineno):
    with pytest.raises(MalformedWordlistLine) as info:
        read_graded(text, "g.csv")
    assert info.value.lineno == lineno
    assert "g.csv" in str(info.value)


def test_family_member_before_head():
    with pytest.raises(MalformedWordlistLine):
        read_families("    orphan\n")


def test_conflicting_override():
    with pytest.raises(ConflictingOverride) as info:
        read_overrides("cat,force_keyword\ncat,force_non_keyword\n", "o.csv")
    assert info.value.lineno == 2


def test_repeated_identical_override_is_fine():
    assert read_overrides("cat,proper_name\ncat,proper_name\n") == {
        "cat": (Directive.PROPER_NAME, None)
    }


@pytest.mark.parametrize("text", ["cat,force_level\n", "cat,proper_name,B1\n", "cat,shout\n"])
def test_bad_override_lines(text):
    with pytest.raises(MalformedWordlistLine):
        read_overrides(text)


def test_bom_tolerated(tmp_path):
    path = tmp_path / "g.csv"
    path.write_bytes("﻿cat,A1\n".encode())
    assert build_lexicon(path).level_of("cat") is CefrLevel.A1


# --- annotation ---------------------------------------------------------------


def test_all_a1_document_has_no_keywords(lexicon):
    doc = make_doc((0, 1000, "I like my dog and the red car."), (1000, 2000, "You go home."))
    assert len(annotate(lexicon, doc)) == 0


def test_planted_keywords(lexicon):
    doc = parse_srt(read_fixture(FIXTURES / "planted.srt"))
    ann = annotate(lexicon, doc)
    surfaces = {t.position: t.normalized for t in tokenize(doc)}
    assert sorted(surfaces[p] for p in ann.keywords) == sorted(
        ["aggressive", "ridiculous", "proposal", "relief", "spite", "zugzwang", "serendipitous"]
    )
    assert set(ann.keywords) == brute_force_keywords(doc)
    words = [t for t in tokenize(doc) if t.kind is TokenKind.WORD]
    assert len(words) == 48  # counted by hand: 9+8+8+10+8+5


def test_planted_with_proper_name(lexicon):
    doc = parse_srt(read_fixture(FIXTURES / "planted.srt"))
    ann = annotate(lexicon.with_proper_names({"Zugzwang"}), doc)
    assert len(ann) == 6


def test_counts_match_set(lexicon):
    doc = parse_srt(read_fixture(FIXTURES / "corpus" / "11_scene.srt"))
    ann = annotate(lexicon, doc)
    assert sum(ann.counts) == len(ann)
    for ci, count in enumerate(ann.counts):
        assert count == len(ann.in_cue(ci))


@pytest.mark.parametrize("path", sorted((FIXTURES / "corpus").glob("*.srt")), ids=lambda p: p.name)
def test_annotation_soundness(lexicon, path):
    doc = parse_srt(read_fixture(path))
    ann = annotate(lexicon, doc)
    tokens = {t.position: t for t in tokenize(doc)}
    assert all(tokens[p].kind is TokenKind.WORD for p in ann.keywords)
    assert {p for p, t in tokens.items() if is_keyword(lexicon, t)} == set(ann.keywords)
    assert annotate(lexicon, doc) == ann


def test_proper_name_detection(lexicon):
    doc = parse_srt(read_fixture(FIXTURES / "names.srt"))
    assert detect_proper_names(doc, lexicon) == {"nicole", "charlie", "henry"}


def test_sentence_initial_only_is_excluded(lexicon):
    doc = make_doc((0, 1000, "The end. The cat."), (1000, 2000, "Zounds, Nicole!"))
    assert detect_proper_names(doc, lexicon) == {"nicole"}


def test_level_counts(lexicon):
    counts = lexicon.level_counts()
    assert sum(counts.values()) == len(lexicon.entries)
    assert counts[(CefrLevel.C1, Source.OVERRIDE)] == 1
