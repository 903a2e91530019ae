"""Command-line front end.

Commands::

    kwcaptions lexicon build --graded oxford.csv [--family fam.txt ...] [--overrides ov.csv]
    kwcaptions generate film.srt --variant {standard,kw,timedkw,timedhl,all} [--alignment a.json]
    kwcaptions analyze film.srt [--parts 30] [--top 4]

Exit codes: 0 ok, 1 bad input srt, 2 config or wordlist error, 3 bad alignment.

A ``--config`` file holds ``key = value`` lines using the long option names
(``graded``, ``family``, ``overrides``, ``alignment``, ``threshold``,
``color``, ``min_display_ms``, ``extension_ms``, ``parts``, ``top``,
``out_dir``, ``variant``); ``family`` takes a comma-separated list and
relative paths are resolved against the config file's directory. Command-line
flags win over the config file.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path
from typing import Any

from .alignment import TimingSource, map_alignment, parse_alignment, proportional_timing
from .errors import MalformedAlignment, SrtError, WordlistError
from .lexicon import (
    GRADED_LEVELS,
    CefrLevel,
    Directive,
    Lexicon,
    Source,
    annotate,
    build_lexicon,
    detect_proper_names,
)
from .scene_analyzer import format_csv, format_table, partition_density, top_partitions
from .srt_model import Document, normalize_color, parse_srt, serialize_srt
from .variants import Variant, VariantParams, generate

EXIT_OK, EXIT_SRT, EXIT_CONFIG, EXIT_ALIGNMENT = 0, 1, 2, 3

_PATH_KEYS = {"graded", "overrides", "alignment", "out_dir"}
_CONFIG_KEYS = _PATH_KEYS | {
    "family",
    "threshold",
    "color",
    "min_display_ms",
    "extension_ms",
    "parts",
    "top",
    "variant",
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


# --------------------------------------------------------------------------
# Config and argument handling
# --------------------------------------------------------------------------


def read_config(path: str) -> dict[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise CliError(EXIT_CONFIG, f"cannot read config {path}: {exc.strerror}") from None
    base = Path(path).parent
    config: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if not sep or key not in _CONFIG_KEYS:
            raise CliError(EXIT_CONFIG, f"{path}:{lineno}: expected 'key = value' with a known key")
        if key in _PATH_KEYS:
            config[key] = str(base / value)
        elif key == "family":
            config[key] = [str(base / v.strip()) for v in value.split(",") if v.strip()]
        else:
            config[key] = value
    return config


def _setting(args: argparse.Namespace, config: dict[str, Any], key: str, default=None):
    value = getattr(args, key, None)
    if value is None or value == []:
        value = config.get(key, default)
    return value


def _as_int(value, key: str, minimum: int) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise CliError(EXIT_CONFIG, f"{key} must be an integer, got {value!r}") from None
    if number < minimum:
        raise CliError(EXIT_CONFIG, f"{key} must be >= {minimum}, got {number}")
    return number


def _threshold(value) -> CefrLevel:
    try:
        level = value if isinstance(value, CefrLevel) else CefrLevel.parse(str(value))
    except ValueError:
        raise CliError(EXIT_CONFIG, f"invalid threshold {value!r}") from None
    if level.rank < 2:
        raise CliError(EXIT_CONFIG, "threshold must be one of A2..C2")
    return level


def _load_lexicon(args: argparse.Namespace, config: dict[str, Any]) -> Lexicon:
    graded = _setting(args, config, "graded")
    if not graded:
        raise CliError(EXIT_CONFIG, "no graded wordlist given (use --graded or the config file)")
    families = _setting(args, config, "family", [])
    overrides = _setting(args, config, "overrides")
    threshold = _threshold(_setting(args, config, "threshold", "B2"))
    try:
        return build_lexicon(graded, families, overrides, threshold)
    except OSError as exc:
        raise CliError(
            EXIT_CONFIG, f"cannot read wordlist {exc.filename}: {exc.strerror}"
        ) from None
    except WordlistError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None


def _load_srt(path: str) -> Document:
    try:
        return parse_srt(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(EXIT_SRT, f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise CliError(EXIT_SRT, f"{path}: not valid UTF-8") from None
    except SrtError as exc:
        raise CliError(EXIT_SRT, f"{path}: {exc}") from None


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _write_all(outputs: dict[Path, str]) -> None:
    try:
        for path, text in outputs.items():
            _write_atomic(path, text)
    except OSError as exc:
        raise CliError(
            EXIT_CONFIG, f"cannot write {exc.filename or 'output'}: {exc.strerror}"
        ) from None


def _stem(path: str) -> str:
    name = Path(path).name
    return name[:-4] if name.lower().endswith(".srt") else name


def _out_dir(args: argparse.Namespace, config: dict[str, Any]) -> Path:
    return Path(_setting(args, config, "out_dir") or Path(args.input).parent)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def lexicon_report(lex: Lexicon) -> str:
    counts = lex.level_counts()
    sources = list(Source)
    rows = [f"lexicon: {len(lex.entries)} entries, keyword threshold {lex.threshold.value}"]
    rows.append(f"{'level':<6}" + "".join(f"{s.value:>10}" for s in sources) + f"{'total':>10}")
    for level in GRADED_LEVELS:
        per = [counts.get((level, s), 0) for s in sources]
        rows.append(f"{level.value:<6}" + "".join(f"{c:>10}" for c in per) + f"{sum(per):>10}")
    totals = [sum(counts.get((lvl, s), 0) for lvl in GRADED_LEVELS) for s in sources]
    rows.append(f"{'total':<6}" + "".join(f"{c:>10}" for c in totals) + f"{sum(totals):>10}")
    directives = {d: 0 for d in Directive if d is not Directive.FORCE_LEVEL}
    for d in lex.directives.values():
        directives[d] += 1
    rows.append("directives: " + " ".join(f"{d.value}={n}" for d, n in directives.items()))
    return "\n".join(rows) + "\n"


def cmd_lexicon_build(args: argparse.Namespace, config: dict[str, Any]) -> int:
    lex = _load_lexicon(args, config)
    sys.stdout.write(lexicon_report(lex))
    return EXIT_OK


def _prepare(args, config) -> tuple[Document, Lexicon]:
    lex = _load_lexicon(args, config)
    doc = _load_srt(args.input)
    if not args.no_proper_names:
        lex = lex.with_proper_names(detect_proper_names(doc, lex))
    return doc, lex


def cmd_generate(args: argparse.Namespace, config: dict[str, Any]) -> int:
    variant_name = "all" if args.all else _setting(args, config, "variant")
    if not variant_name:
        raise CliError(EXIT_CONFIG, "choose a variant with --variant or --all")
    if variant_name == "all":
        variants = list(Variant)
    else:
        try:
            variants = [Variant(variant_name)]
        except ValueError:
            raise CliError(EXIT_CONFIG, f"unknown variant {variant_name!r}") from None
    try:
        params = VariantParams(
            highlight_color=normalize_color(str(_setting(args, config, "color", "#FFFF00"))),
            min_display_ms=_as_int(
                _setting(args, config, "min_display_ms", 500), "min_display_ms", 1
            ),
            extension_ms=_as_int(_setting(args, config, "extension_ms", 300), "extension_ms", 0),
        )
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    out_dir = _out_dir(args, config)

    doc, lex = _prepare(args, config)
    ann = annotate(lex, doc)

    timing = None
    if any(v.timed for v in variants):
        alignment_path = _setting(args, config, "alignment")
        if alignment_path:
            try:
                aligned = parse_alignment(Path(alignment_path).read_text(encoding="utf-8"))
            except OSError as exc:
                raise CliError(
                    EXIT_ALIGNMENT, f"cannot read alignment {alignment_path}: {exc.strerror}"
                ) from None
            except (UnicodeDecodeError, MalformedAlignment) as exc:
                raise CliError(EXIT_ALIGNMENT, f"{alignment_path}: {exc}") from None
            timing = map_alignment(doc, aligned)
            if timing and timing.source_counts()[TimingSource.PROPORTIONAL] == len(timing):
                print(
                    "notice: alignment does not match the subtitles; "
                    "using proportional word timing",
                    file=sys.stderr,
                )
        else:
            timing = proportional_timing(doc)
            print(
                "notice: no alignment given; timed variants use proportional word timing",
                file=sys.stderr,
            )

    stem = _stem(args.input)
    outputs = {
        out_dir / f"{stem}{v.suffix}": serialize_srt(generate(v, doc, ann, timing, params))
        for v in variants
    }
    _write_all(outputs)
    for path in outputs:
        print(path)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace, config: dict[str, Any]) -> int:
    parts = _as_int(_setting(args, config, "parts", 30), "parts", 1)
    top = _as_int(_setting(args, config, "top", 4), "top", 1)
    if top > parts:
        raise CliError(EXIT_CONFIG, f"--top {top} exceeds --parts {parts}")
    out_dir = _out_dir(args, config)

    doc, lex = _prepare(args, config)
    stats = partition_density(doc, annotate(lex, doc), parts)
    best = top_partitions(stats, top)
    path = out_dir / f"{_stem(args.input)}.partitions.csv"
    _write_all({path: format_csv(stats)})
    sys.stdout.write(format_table(stats, best))
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _level_arg(text: str) -> CefrLevel:
    try:
        return _threshold(text)
    except CliError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _color_arg(text: str) -> str:
    try:
        return normalize_color(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--graded", help="graded wordlist (form,level)")
    common.add_argument(
        "--family", action="append", default=[], help="word family list; repeatable"
    )
    common.add_argument("--overrides", help="override file (form,directive[,level])")
    common.add_argument("--threshold", type=_level_arg, help="lowest keyword level (default B2)")

    parser = argparse.ArgumentParser(
        prog="kwcaptions", description="Keyword-enhanced captions from SubRip files."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    lexicon = sub.add_parser("lexicon", help="wordlist tools")
    lexicon_sub = lexicon.add_subparsers(dest="lexicon_command", required=True)
    build = lexicon_sub.add_parser(
        "build", parents=[common], help="build and summarize the lexicon"
    )
    build.set_defaults(func=cmd_lexicon_build)

    gen = sub.add_parser("generate", parents=[common], help="write caption variants")
    gen.add_argument("input", help="input .srt file")
    gen.add_argument("--variant", choices=[v.value for v in Variant] + ["all"])
    gen.add_argument("--all", action="store_true", help="same as --variant all")
    gen.add_argument("--alignment", help="forced-alignment JSON")
    gen.add_argument("--color", type=_color_arg, help="highlight color (default #FFFF00)")
    gen.add_argument("--min-display-ms", dest="min_display_ms", type=_positive_int)
    gen.add_argument("--extension-ms", dest="extension_ms", type=_non_negative_int)
    gen.add_argument("--out-dir", dest="out_dir", help="default: next to the input")
    gen.add_argument("--no-proper-names", action="store_true", help="skip proper-name detection")
    gen.set_defaults(func=cmd_generate)

    ana = sub.add_parser("analyze", parents=[common], help="keyword density per partition")
    ana.add_argument("input", help="input .srt file")
    ana.add_argument("--parts", type=_positive_int, help="number of partitions (default 30)")
    ana.add_argument("--top", type=_positive_int, help="partitions to report (default 4)")
    ana.add_argument(
        "--out-dir", dest="out_dir", help="where the CSV goes; default: next to the input"
    )
    ana.add_argument("--no-proper-names", action="store_true", help="skip proper-name detection")
    ana.set_defaults(func=cmd_analyze)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = read_config(args.config) if args.config else {}
        return args.func(args, config)
    except CliError as exc:
        print(f"kwcaptions: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
