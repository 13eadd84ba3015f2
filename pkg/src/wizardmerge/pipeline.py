"""End-to-end analysis over three file trees.

Merges every file of the union tree, obtains per-variant definition
metadata (from JSON documents or the built-in extractor), aligns the
diff code blocks with the dependency graphs, detects violations, ranks
the interesting pairs, and writes merged files plus reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .alignment import AlignedPair, MatchPolicy, align
from .diff3 import DcbPair, MergeOutcome, split_lines, three_way_merge
from .extractor import ExtractionError, extract_source
from .metadata import MetadataError, MetadataSet, load_metadata
from .odg import Odg, build_odg, odg_to_dict
from .priority import Mdg, PriorityGroup, build_mdg, condense_and_rank
from .report import (
    DEFAULT_HEADER,
    SuggestionItem,
    build_items,
    render_json,
    render_text,
)
from .violations import ViolationSet, detect_violations, verdicts_to_dicts

SOURCE_SUFFIXES = {".c", ".h", ".cc", ".hh", ".cpp", ".hpp", ".cxx"}


class InputError(ValueError):
    """Unusable input: missing paths, malformed metadata, extractor failure."""


@dataclass
class AnalysisConfig:
    base: Path
    ours: Path
    theirs: Path
    meta_a: Path | None = None
    meta_b: Path | None = None
    extract: bool = False
    match_policy: MatchPolicy = MatchPolicy.STRICT
    out_dir: Path = Path("wizardmerge-out")
    formats: tuple[str, ...] = ("text",)
    header: str = DEFAULT_HEADER
    dump_odg: bool = False
    dump_sdg: bool = False
    dump_verdicts: bool = False
    plot: bool = False

    def __post_init__(self) -> None:
        from_files = self.meta_a is not None or self.meta_b is not None
        if from_files and self.extract:
            raise InputError("choose either metadata files or --extract, not both")
        if from_files and (self.meta_a is None or self.meta_b is None):
            raise InputError("metadata files must be given for both variants")
        if not from_files and not self.extract:
            raise InputError("no metadata source: pass --meta-a/--meta-b or --extract")


@dataclass
class AnalysisResult:
    outcomes: list[MergeOutcome]
    aligned: AlignedPair
    violations: ViolationSet
    mdg: Mdg
    groups: list[PriorityGroup]
    items: list[SuggestionItem]
    text_report: str
    json_report: dict
    exit_code: int
    written: list[Path] = field(default_factory=list)

    @property
    def pairs_by_id(self) -> dict[int, DcbPair]:
        return {p.id: p for o in self.outcomes for p in o.pairs}


def _read_tree(root: Path) -> dict[str, str]:
    """Relative path -> text; a single file counts as a one-file tree."""
    if root.is_file():
        return {root.name: _read_text(root)}
    if not root.is_dir():
        raise InputError(f"{root}: no such file or directory")
    files: dict[str, str] = {}
    for path in sorted(root.rglob("*")):
        if path.is_file():
            files[path.relative_to(root).as_posix()] = _read_text(path)
    return files


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not valid UTF-8: {exc}") from exc


def _renumber(outcomes: list[MergeOutcome]) -> list[MergeOutcome]:
    """Make pair ids dense and unique across all files."""
    next_id = 0
    renumbered: list[MergeOutcome] = []
    for outcome in outcomes:
        pairs = []
        ranges = {}
        for pair in outcome.pairs:
            pairs.append(DcbPair(next_id, pair.dcb_a, pair.dcb_b,
                                 pair.base_range, pair.status))
            ranges[next_id] = outcome.merged_ranges[pair.id]
            next_id += 1
        renumbered.append(MergeOutcome(outcome.file, outcome.merged_text,
                                       tuple(pairs), ranges))
    return renumbered


def _source_files(tree: dict[str, str]) -> list[tuple[str, str]]:
    return [(path, text) for path, text in sorted(tree.items())
            if Path(path).suffix in SOURCE_SUFFIXES]


def _check_metadata_against_tree(meta: MetadataSet, tree: dict[str, str],
                                 label: str) -> None:
    lines_of = {path: len(split_lines(text)) for path, text in tree.items()}
    for d in meta.definitions:
        if d.file not in lines_of:
            raise InputError(
                f"metadata {label}: {d.file}: file not present in variant tree")
        if d.range.end_line > lines_of[d.file]:
            raise InputError(
                f"metadata {label}: {d.file}:{d.range.end_line}: definition "
                f"{d.name!r} ends past the file ({lines_of[d.file]} lines)")


def run_analyze(config: AnalysisConfig) -> AnalysisResult:
    roots = {"base": Path(config.base), "ours": Path(config.ours),
             "theirs": Path(config.theirs)}
    if all(root.is_file() for root in roots.values()):
        # single-file mode: merge under one shared name
        shared = roots["ours"].name
        trees = {label: {shared: _read_text(root)}
                 for label, root in roots.items()}
    elif any(root.is_file() for root in roots.values()):
        raise InputError("base/ours/theirs must be all directories or all files")
    else:
        trees = {label: _read_tree(root) for label, root in roots.items()}

    all_paths = sorted(set(trees["base"]) | set(trees["ours"]) | set(trees["theirs"]))
    outcomes = [
        three_way_merge(
            trees["base"].get(path, ""),
            trees["ours"].get(path, ""),
            trees["theirs"].get(path, ""),
            file=path,
        )
        for path in all_paths
    ]
    outcomes = _renumber(outcomes)

    try:
        if config.extract:
            meta_a = extract_source(_source_files(trees["ours"]), variant="A")
            meta_b = extract_source(_source_files(trees["theirs"]), variant="B")
        else:
            meta_a = load_metadata(config.meta_a)
            meta_b = load_metadata(config.meta_b)
    except (MetadataError, ExtractionError) as exc:
        raise InputError(str(exc)) from exc
    _check_metadata_against_tree(meta_a, trees["ours"], "A")
    _check_metadata_against_tree(meta_b, trees["theirs"], "B")

    odg_a = build_odg(meta_a)
    odg_b = build_odg(meta_b)
    lines_a = {p: len(split_lines(t)) for p, t in trees["ours"].items()}
    lines_b = {p: len(split_lines(t)) for p, t in trees["theirs"].items()}
    aligned = align(odg_a, odg_b, outcomes, lines_a, lines_b, config.match_policy)
    violations = detect_violations(aligned)
    mdg = build_mdg(aligned, violations)
    groups = condense_and_rank(mdg)
    pairs_by_id = {p.id: p for o in outcomes for p in o.pairs}
    items = build_items(groups, pairs_by_id)

    has_conflicts = any(o.has_conflicts for o in outcomes)
    has_violations = bool(violations.violated_a or violations.violated_b)
    exit_code = 1 if has_conflicts or has_violations else 0

    result = AnalysisResult(
        outcomes=outcomes,
        aligned=aligned,
        violations=violations,
        mdg=mdg,
        groups=groups,
        items=items,
        text_report=render_text(items, config.header),
        json_report=render_json(items),
        exit_code=exit_code,
    )
    _write_artifacts(config, result, odg_a, odg_b)
    return result


def _write_artifacts(config: AnalysisConfig, result: AnalysisResult,
                     odg_a: Odg, odg_b: Odg) -> None:
    out = Path(config.out_dir)
    merged_root = out / "merged"
    for outcome in result.outcomes:
        target = merged_root / outcome.file
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(outcome.merged_text, encoding="utf-8")
        result.written.append(target)

    def write(path: Path, text: str) -> None:
        path.write_text(text, encoding="utf-8")
        result.written.append(path)

    if "text" in config.formats:
        write(out / "report.txt", result.text_report)
    if "json" in config.formats:
        write(out / "report.json",
              json.dumps(result.json_report, indent=2) + "\n")
    if config.dump_odg:
        write(out / "odg.json", json.dumps(
            {"a": odg_to_dict(odg_a), "b": odg_to_dict(odg_b)}, indent=2) + "\n")
    if config.dump_sdg:
        write(out / "sdg.json", json.dumps(_sdg_dump(result.aligned), indent=2) + "\n")
    if config.dump_verdicts:
        write(out / "verdicts.json", json.dumps(
            verdicts_to_dicts(result.violations), indent=2) + "\n")
    if config.plot:
        from .plotting import render_group_figures

        result.written.extend(
            render_group_figures(result.groups, result.mdg, out / "plots"))


def _sdg_dump(aligned: AlignedPair) -> dict:
    def node_dict(node) -> dict:
        return {
            "fine_id": node.fine_id,
            "variant": node.variant,
            "def_id": node.def_id,
            "kind": node.kind.value,
            "name": node.name,
            "file": node.file,
            "start_line": node.range.start_line,
            "end_line": node.range.end_line,
            "dcb_pair": node.dcb_pair_id,
            "state": node.apply_state.value,
        }

    def sdg_dict(sdg) -> dict:
        return {
            "nodes": [node_dict(n) for n in sdg.nodes],
            "edges": [
                {"from": e.from_fine, "to": e.to_fine, "kind": e.kind}
                for e in sdg.edges
            ],
        }

    return {
        "a": sdg_dict(aligned.sdg_a),
        "b": sdg_dict(aligned.sdg_b),
        "mirrors": [
            {
                "a": link.node_a.fine_id if link.node_a else None,
                "b": link.node_b.fine_id if link.node_b else None,
                "matched": link.matched,
            }
            for link in aligned.links
        ],
    }
