"""Merge analysis toolkit.

Textual three-way merging plus definition-level dependency analysis of
both merge candidates, detecting code blocks a plain merge would apply
silently even though the definitions they rely on were changed or removed
on the other side, and ranking everything worth a look into
priority-ordered groups.
"""

from .alignment import (
    AlignedPair,
    ApplyState,
    FineNode,
    MatchPolicy,
    MirrorLink,
    Sdg,
    SdgEdge,
    align,
    assign_apply_state,
    build_interval_indexes,
    link_mirrors,
    project_edges,
    split_and_chain,
)
from .diff3 import (
    Dcb,
    DcbPair,
    DiffHunk,
    LineRange,
    MergeOutcome,
    PairStatus,
    diff_lines,
    three_way_merge,
)
from .extractor import ExtractionError, extract_source
from .intervals import ColoredSegment, IntervalIndex, IntervalQueryError
from .metadata import (
    DefinitionIndicator,
    DefinitionKind,
    MetadataError,
    MetadataSet,
    RawDependency,
    load_metadata,
    save_metadata,
    validate_metadata,
)
from .odg import Odg, OdgEdge, OdgNode, NodeKind, build_odg
from .pipeline import AnalysisConfig, AnalysisResult, InputError, run_analyze
from .priority import (
    Mdg,
    MdgNode,
    PriorityGroup,
    build_mdg,
    condense_and_rank,
    tarjan_scc,
)
from .report import (
    SuggestionItem,
    build_items,
    parse_text_report,
    render_json,
    render_text,
)
from .violations import Verdict, ViolationSet, classify_edge, detect_violations

__version__ = "0.1.0"

__all__ = [
    "AlignedPair", "AnalysisConfig", "AnalysisResult", "ApplyState",
    "ColoredSegment", "Dcb", "DcbPair", "DefinitionIndicator",
    "DefinitionKind", "DiffHunk", "ExtractionError", "FineNode",
    "InputError", "IntervalIndex", "IntervalQueryError", "LineRange",
    "MatchPolicy", "Mdg", "MdgNode", "MergeOutcome", "MetadataError",
    "MetadataSet", "MirrorLink", "NodeKind", "Odg", "OdgEdge", "OdgNode",
    "PairStatus", "PriorityGroup", "RawDependency", "Sdg", "SdgEdge",
    "SuggestionItem", "Verdict", "ViolationSet", "align",
    "assign_apply_state", "build_interval_indexes", "build_items",
    "build_mdg", "build_odg", "classify_edge", "condense_and_rank",
    "detect_violations", "diff_lines", "extract_source", "link_mirrors",
    "load_metadata", "parse_text_report", "project_edges", "render_json",
    "render_text", "run_analyze", "save_metadata", "split_and_chain",
    "tarjan_scc", "three_way_merge", "validate_metadata",
]
