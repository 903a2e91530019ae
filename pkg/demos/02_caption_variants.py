"""Build all four caption designs for a short scene.

Word times come from a forced-alignment JSON. Keywords shown for under
500 ms get up to 300 ms more, but never run into the next caption.

    python demos/02_caption_variants.py
"""

from __future__ import annotations

from pathlib import Path

from kwcaptions import (
    Variant,
    VariantParams,
    annotate,
    build_lexicon,
    detect_proper_names,
    generate,
    map_alignment,
    parse_alignment,
    parse_srt,
    serialize_srt,
)

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

doc = parse_srt((FIXTURES / "corpus" / "11_scene.srt").read_text(encoding="utf-8"))
lex = build_lexicon(
    FIXTURES / "graded.csv", [FIXTURES / "families.txt"], FIXTURES / "overrides.csv"
)
names = detect_proper_names(doc, lex)
print("detected names:", sorted(names))
ann = annotate(lex.with_proper_names(names), doc)

aligned = parse_alignment((FIXTURES / "scene.align.json").read_text(encoding="utf-8"))
timing = map_alignment(doc, aligned)
print("timing sources:", {k.value: v for k, v in timing.source_counts().items()})

params = VariantParams()
for variant in (Variant.TIMED_KEYWORDS, Variant.TIMED_KEYWORD_HIGHLIGHTS):
    out = serialize_srt(generate(variant, doc, ann, timing, params))
    print(f"\n--- {variant.value}: first blocks ---")
    print("\n\n".join(out.split("\n\n")[:4]))
