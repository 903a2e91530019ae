"""Keyword-enhanced captions for language learners.

Turns a SubRip file into full captions with keyword highlights, timed
keyword-only captions and timed keyword highlights, with keywords picked from
CEFR-graded wordlists and timed from forced-alignment output.
"""

from .alignment import (
    AlignedWord,
    AlignmentStatus,
    TimedSpan,
    TimingSource,
    WordTiming,
    map_alignment,
    parse_alignment,
    proportional_timing,
)
from .errors import (
    CaptionError,
    ConflictingOverride,
    EmptyDocument,
    InvalidPartitionCount,
    MalformedAlignment,
    MalformedTimestamp,
    MalformedWordlistLine,
    MissingTiming,
)
from .lexicon import (
    CefrLevel,
    KeywordAnnotation,
    Lexicon,
    annotate,
    build_lexicon,
    detect_proper_names,
    is_keyword,
    merge_lexicon,
    read_graded,
)
from .scene_analyzer import (
    PartitionStats,
    format_csv,
    format_table,
    partition_density,
    top_partitions,
)
from .srt_model import (
    Cue,
    Document,
    Position,
    Segment,
    Style,
    StyledLine,
    Token,
    TokenKind,
    parse_srt,
    serialize_srt,
    strip_markup,
    tokenize,
)
from .variants import (
    Variant,
    VariantParams,
    gen_keyword_highlights,
    gen_standard,
    gen_timed_keyword_highlights,
    gen_timed_keywords,
    generate,
    resolve_overlaps,
)

__version__ = "0.1.0"
