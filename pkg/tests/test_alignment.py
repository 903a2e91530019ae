from __future__ import annotations

import json

import pytest
from conftest import FIXTURES, make_doc, read_fixture
from hypothesis import given
from hypothesis import strategies as st

from kwcaptions.alignment import (
    AlignedWord,
    AlignmentStatus,
    TimingSource,
    map_alignment,
    parse_alignment,
    proportional_timing,
    seconds_to_ms,
    split_span,
)
from kwcaptions.errors import MalformedAlignment
from kwcaptions.srt_model import TokenKind, parse_srt, tokenize

OK = AlignmentStatus.SUCCESS
NF = AlignmentStatus.NOT_FOUND_IN_AUDIO


def words_of(doc):
    return [t for t in tokenize(doc) if t.kind is TokenKind.WORD]


def spans_by_surface(doc, timing):
    return [
        (w.surface, timing[w.position].onset_ms, timing[w.position].offset_ms)
        for w in words_of(doc)
    ]


def gentle(*entries):
    out = []
    for e in entries:
        if len(e) == 1:
            out.append({"word": e[0], "case": "not-found-in-audio"})
        else:
            out.append({"word": e[0], "case": "success", "start": e[1], "end": e[2]})
    return json.dumps({"words": out})


# --- parsing --------------------------------------------------------------------


def test_parse_success():
    text = '{"words":[{"word":"spite","case":"success","start":10.02,"end":10.48}]}'
    assert parse_alignment(text) == [AlignedWord("spite", 10.02, 10.48, OK)]


def test_parse_not_found():
    (w,) = parse_alignment('{"words":[{"word":"x","case":"not-found-in-audio"}]}')
    assert w.status is NF and w.start_s is None


def test_parse_empty():
    assert parse_alignment('{"words":[]}') == []


def test_extra_fields_ignored():
    assert len(parse_alignment(read_fixture(FIXTURES / "scene.align.json"))) == 77


@pytest.mark.parametrize(
    "text, index",
    [
        ("not json", None),
        ("[]", None),
        ('{"nowords": []}', None),
        ('{"words":[{"word":"a","case":"success","start":1,"end":2},{"case":"success"}]}', 1),
        ('{"words":[{"word":"a","case":"success","start":2,"end":1}]}', 0),
        ('{"words":[{"word":"a","case":"success","start":"1","end":2}]}', 0),
        ('{"words":[{"word":"a","case":"success","start":true,"end":2}]}', 0),
        ('{"words":[{"word":"a","case":"success","start":-1,"end":2}]}', 0),
        ('{"words":[{"word":"a","case":"maybe"}]}', 0),
        ('{"words":[{"word":"a","case":"success","start":1}]}', 0),
    ],
)
def test_parse_malformed(text, index):
    with pytest.raises(MalformedAlignment) as info:
        parse_alignment(text)
    assert info.value.word_index == index


@pytest.mark.parametrize(
    "s, ms", [(10.02, 10020), (0.0005, 1), (0.0015, 2), (2.5045, 2505), (1.2345, 1235), (0.0, 0)]
)
def test_seconds_to_ms_half_up(s, ms):
    assert seconds_to_ms(s) == ms


# --- proportional ----------------------------------------------------------------


def test_proportional_example():
    doc = make_doc((0, 1000, "a bcd"))
    assert spans_by_surface(doc, proportional_timing(doc)) == [("a", 0, 250), ("bcd", 250, 1000)]


def test_single_word_spans_cue():
    doc = make_doc((300, 900, "Hello!"))
    assert spans_by_surface(doc, proportional_timing(doc)) == [("Hello", 300, 900)]


def test_scene_conservation():
    doc = parse_srt(read_fixture(FIXTURES / "corpus" / "11_scene.srt"))
    timing = proportional_timing(doc)
    for ci, cue in enumerate(doc.cues):
        spans = [timing[w.position] for w in words_of(doc) if w.cue_index == ci]
        if not spans:
            continue  # sound-only cue: nothing to time
        assert sum(s.duration for s in spans) == cue.duration
        assert all(s.source is TimingSource.PROPORTIONAL for s in spans)


@given(
    st.integers(0, 10**6),
    st.integers(0, 10**5),
    st.lists(st.integers(0, 50), min_size=1, max_size=30),
)
def test_split_span_properties(start, length, weights):
    pieces = split_span(start, start + length, weights)
    assert len(pieces) == len(weights)
    assert pieces[0][0] == start
    assert all(a < b for a, b in pieces)
    assert all(p[1] == q[0] for p, q in zip(pieces, pieces[1:]))
    if length >= len(weights):
        assert pieces[-1][1] == start + length


def test_split_span_is_proportional():
    assert split_span(0, 1000, [1, 3]) == [(0, 250), (250, 1000)]
    assert split_span(0, 10, [1, 1, 1]) == [(0, 3), (3, 6), (6, 10)]


# --- mapping ----------------------------------------------------------------------


def test_perfect_transcript_all_aligned():
    doc = make_doc((1000, 3000, "one two three"))
    aligned = parse_alignment(gentle(("one", 1.0, 1.5), ("two", 1.6, 2.0), ("three", 2.1, 2.9)))
    timing = map_alignment(doc, aligned)
    assert spans_by_surface(doc, timing) == [
        ("one", 1000, 1500),
        ("two", 1600, 2000),
        ("three", 2100, 2900),
    ]
    assert timing.source_counts()[TimingSource.ALIGNED] == 3


def test_interpolated_between_neighbors():
    doc = make_doc((9000, 12000, "abc def ghi"))
    aligned = parse_alignment(gentle(("abc", 10.0, 10.4), ("def",), ("ghi", 11.0, 11.4)))
    timing = map_alignment(doc, aligned)
    mid = timing[words_of(doc)[1].position]
    assert (mid.onset_ms, mid.offset_ms, mid.source) == (10400, 11000, TimingSource.INTERPOLATED)


def test_interpolation_weighted_by_length():
    doc = make_doc((9000, 12000, "abc d efg ghi"))
    aligned = parse_alignment(gentle(("abc", 10.0, 10.4), ("ghi", 11.2, 11.4)))
    timing = map_alignment(doc, aligned)
    # 800 ms gap shared 1:3 between "d" and "efg".
    assert spans_by_surface(doc, timing)[1:3] == [("d", 10400, 10600), ("efg", 10600, 11200)]


def test_unmatched_edges_use_cue_bounds():
    doc = make_doc((1000, 3000, "xx mid yy"))
    aligned = parse_alignment(gentle(("mid", 1.5, 2.0)))
    assert spans_by_surface(doc, map_alignment(doc, aligned, min_match_ratio=0.2)) == [
        ("xx", 1000, 1500),
        ("mid", 1500, 2000),
        ("yy", 2000, 3000),
    ]


def test_mismatched_alignment_falls_back():
    doc = make_doc((0, 2000, "the quick brown fox"), (2000, 4000, "jumps over lazy dogs"))
    aligned = parse_alignment(
        gentle(*[(w, i, i + 0.5) for i, w in enumerate("lorem ipsum dolor sit".split())])
    )
    assert map_alignment(doc, aligned) == proportional_timing(doc)


def test_no_alignment_equals_proportional():
    doc = parse_srt(read_fixture(FIXTURES / "corpus" / "11_scene.srt"))
    assert map_alignment(doc, []) == proportional_timing(doc)


def test_swapped_lines_recovered():
    doc = make_doc((0, 4000, "alpha beta gamma\ndelta epsilon zeta"))
    order = ["delta", "epsilon", "zeta", "alpha", "beta", "gamma"]
    aligned = parse_alignment(gentle(*[(w, 0.5 * i, 0.5 * i + 0.4) for i, w in enumerate(order)]))
    timing = map_alignment(doc, aligned)
    assert all(timing[w.position].source is TimingSource.ALIGNED for w in words_of(doc))
    # Onsets are made monotone; a raised onset keeps its duration.
    onsets = [timing[w.position].onset_ms for w in words_of(doc)]
    assert onsets == sorted(onsets)


def test_far_drift_is_discarded():
    doc = make_doc((1000, 2000, "one two"), (2000, 3000, "three four"))
    aligned = parse_alignment(
        gentle(("one", 1.0, 1.4), ("two", 1.5, 1.9), ("three", 9.0, 9.5), ("four", 2.5, 2.9))
    )
    timing = map_alignment(doc, aligned)
    three = timing[words_of(doc)[2].position]
    assert three.source is TimingSource.INTERPOLATED
    assert (three.onset_ms, three.offset_ms) == (2000, 2500)


def check_invariants(doc, timing, slack=1000):
    for w in words_of(doc):
        assert w.position in timing
    for ci, cue in enumerate(doc.cues):
        spans = [timing[w.position] for w in words_of(doc) if w.cue_index == ci]
        assert all(s.offset_ms > s.onset_ms for s in spans)
        assert [s.onset_ms for s in spans] == sorted(s.onset_ms for s in spans)
        assert all(
            cue.start - slack <= s.onset_ms and s.offset_ms <= cue.end + slack for s in spans
        )


def test_scene_fixture():
    doc = parse_srt(read_fixture(FIXTURES / "corpus" / "11_scene.srt"))
    aligned = parse_alignment(read_fixture(FIXTURES / "scene.align.json"))
    timing = map_alignment(doc, aligned)
    check_invariants(doc, timing)
    counts = timing.source_counts()
    assert counts[TimingSource.INTERPOLATED] == 1  # "everything" was not found in audio
    assert counts[TimingSource.PROPORTIONAL] == 0
    assert map_alignment(doc, aligned) == timing


_vocab = st.sampled_from("one two three four five six seven eight".split())


@st.composite
def doc_and_alignment(draw):
    n = draw(st.integers(1, 5))
    cues, t = [], 0
    for _ in range(n):
        t += draw(st.integers(0, 2000))
        dur = draw(st.integers(1, 4000))
        cues.append((t, t + dur, " ".join(draw(st.lists(_vocab, min_size=1, max_size=6)))))
    entries = []
    for _ in range(draw(st.integers(0, 20))):
        word = draw(_vocab)
        if draw(st.booleans()):
            s = draw(st.integers(0, 20000)) / 1000
            entries.append(AlignedWord(word, s, s + draw(st.integers(1, 900)) / 1000, OK))
        else:
            entries.append(AlignedWord(word, None, None, NF))
    return make_doc(*cues), entries


@given(doc_and_alignment())
def test_mapping_invariants_property(case):
    doc, aligned = case
    timing = map_alignment(doc, aligned)
    check_invariants(doc, timing)
    assert map_alignment(doc, aligned) == timing
