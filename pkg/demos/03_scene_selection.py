"""Find keyword-dense stretches of a film.

The subtitle span is cut into equal-length parts and keywords are counted in
each. This demo builds a synthetic 30-minute file with a burst of rare words
around minute 10 and shows that the burst ranks first.

    python demos/03_scene_selection.py
"""

from __future__ import annotations

import random

from kwcaptions import (
    Cue,
    Document,
    StyledLine,
    annotate,
    format_table,
    merge_lexicon,
    partition_density,
    read_graded,
    top_partitions,
)

rng = random.Random(1)
common = ["the", "dog", "and", "we", "go", "home", "big", "cat"]
rare = ["settlement", "custody", "mediation", "ridiculous"]

cues = []
for k in range(360):
    start = k * 5000
    words = rng.choices(common, k=6)
    if 600_000 <= start < 720_000:
        words += rng.sample(rare, 2)
    cues.append(Cue(k + 1, start, start + 4000, (StyledLine.plain(" ".join(words)),)))
doc = Document(tuple(cues))

lex = merge_lexicon(read_graded("\n".join(f"{w},A1" for w in common)))
stats = partition_density(doc, annotate(lex, doc), n=30)
print(format_table(stats, top_partitions(stats, 4)))
