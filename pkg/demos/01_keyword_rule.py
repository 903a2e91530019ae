"""Which words count as keywords?

The lexicon works in reverse: a word is a keyword unless a graded list puts
it below the threshold (B2 by default). Exact forms beat word families, so
"acceptance" keeps its own C1 level even though its family head "accept" is A1.

    python demos/01_keyword_rule.py
"""

from __future__ import annotations

from pathlib import Path

from kwcaptions import CefrLevel, annotate, build_lexicon, parse_srt, tokenize

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

lex = build_lexicon(
    FIXTURES / "graded.csv", [FIXTURES / "families.txt"], FIXTURES / "overrides.csv"
)

for form in ("accept", "acceptance", "walked", "zugzwang", "serendipity", "mediator"):
    print(f"{form:<12} level {lex.level_of(form).value:<7} keyword={lex.is_keyword_form(form)}")

doc = parse_srt((FIXTURES / "planted.srt").read_text(encoding="utf-8"))
ann = annotate(lex, doc)
surface = {t.position: t.surface for t in tokenize(doc)}
print("\nplanted document keywords:", ", ".join(surface[p] for p in sorted(ann.keywords)))

# Raising the threshold can only shrink the keyword set.
stricter = annotate(lex.with_threshold(CefrLevel.C1), doc)
print("with threshold C1:", ", ".join(surface[p] for p in sorted(stricter.keywords)))
