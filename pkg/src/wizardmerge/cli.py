"""Command line interface.

Subcommands:
  analyze  merge two trees against a base and report grouped suggestions
  extract  scan a source tree and write its metadata JSON document
  merge    three-way merge of a single file (no dependency analysis)
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .alignment import MatchPolicy
from .diff3 import three_way_merge
from .extractor import ExtractionError, extract_source
from .metadata import MetadataError, metadata_to_dict
from .pipeline import (
    SOURCE_SUFFIXES,
    AnalysisConfig,
    InputError,
    run_analyze,
)
from .report import DEFAULT_HEADER, LEGACY_HEADER


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wizardmerge",
        description="Three-way merge analysis with dependency-aware "
                    "detection of silently misapplied code blocks.")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze a three-way merge")
    analyze.add_argument("--base", required=True, type=Path)
    analyze.add_argument("--ours", required=True, type=Path,
                         help="variant A tree")
    analyze.add_argument("--theirs", required=True, type=Path,
                         help="variant B tree")
    analyze.add_argument("--meta-a", type=Path)
    analyze.add_argument("--meta-b", type=Path)
    analyze.add_argument("--extract", action="store_true",
                         help="extract metadata from the variant sources")
    analyze.add_argument("--match-policy", choices=["strict", "name-only"],
                         default="strict")
    analyze.add_argument("--format", choices=["text", "json", "both"],
                         default="text")
    analyze.add_argument("--out", type=Path, default=Path("wizardmerge-out"))
    analyze.add_argument("--dump-odg", action="store_true")
    analyze.add_argument("--dump-sdg", action="store_true")
    analyze.add_argument("--dump-verdicts", action="store_true")
    analyze.add_argument("--plot", action="store_true",
                         help="render one figure per priority group")
    analyze.add_argument("--legacy-header", action="store_true",
                         help=f"title the report '{LEGACY_HEADER} Result'")
    analyze.add_argument("--quiet", action="store_true",
                         help="do not echo the text report to stdout")

    extract = sub.add_parser("extract", help="extract metadata from sources")
    extract.add_argument("--in", dest="in_dir", required=True, type=Path)
    extract.add_argument("--out", required=True, type=Path)
    extract.add_argument("--variant", default="A")

    merge = sub.add_parser("merge", help="three-way merge one file to stdout")
    merge.add_argument("--base", required=True, type=Path)
    merge.add_argument("--ours", required=True, type=Path)
    merge.add_argument("--theirs", required=True, type=Path)
    return parser


def _cmd_analyze(args: argparse.Namespace) -> int:
    formats = ("text", "json") if args.format == "both" else (args.format,)
    config = AnalysisConfig(
        base=args.base,
        ours=args.ours,
        theirs=args.theirs,
        meta_a=args.meta_a,
        meta_b=args.meta_b,
        extract=args.extract,
        match_policy=MatchPolicy(args.match_policy),
        out_dir=args.out,
        formats=formats,
        header=LEGACY_HEADER if args.legacy_header else DEFAULT_HEADER,
        dump_odg=args.dump_odg,
        dump_sdg=args.dump_sdg,
        dump_verdicts=args.dump_verdicts,
        plot=args.plot,
    )
    result = run_analyze(config)
    if not args.quiet:
        sys.stdout.write(result.text_report)
    return result.exit_code


def _cmd_extract(args: argparse.Namespace) -> int:
    root = args.in_dir
    if not root.is_dir():
        raise InputError(f"{root}: not a directory")
    files = []
    for path in sorted(root.rglob("*")):
        if path.is_file() and path.suffix in SOURCE_SUFFIXES:
            files.append((path.relative_to(root).as_posix(),
                          path.read_text(encoding="utf-8")))
    meta = extract_source(files, variant=args.variant)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(metadata_to_dict(meta), indent=2) + "\n",
                        encoding="utf-8")
    return 0


def _cmd_merge(args: argparse.Namespace) -> int:
    texts = {}
    for label, path in (("base", args.base), ("ours", args.ours),
                        ("theirs", args.theirs)):
        if not path.is_file():
            raise InputError(f"{path}: no such file")
        texts[label] = path.read_text(encoding="utf-8")
    outcome = three_way_merge(texts["base"], texts["ours"], texts["theirs"],
                              file=args.base.name)
    sys.stdout.write(outcome.merged_text)
    return 1 if outcome.has_conflicts else 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "analyze": _cmd_analyze,
        "extract": _cmd_extract,
        "merge": _cmd_merge,
    }
    try:
        return handlers[args.command](args)
    except (InputError, MetadataError, ExtractionError, OSError) as exc:
        print(f"wizardmerge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
