"""Suggestion report rendering.

One item per conflict pair (kind C, both ranges) and one per surviving
side of a violated pair (kind A or B, the applied side annotated).
Items are grouped and ordered by resolution priority; the text layout
threads a ``|`` tree whose depth follows the rank buckets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .alignment import ApplyState
from .diff3 import DcbPair, LineRange
from .priority import PriorityGroup

DEFAULT_HEADER = "WizardMerge"
LEGACY_HEADER = "MergeGuardian"


@dataclass(frozen=True)
class SuggestionItem:
    kind: str  # "C" | "A" | "B"
    applied: bool
    name: str
    qualified_name: str
    file: str
    range_a: LineRange | None
    range_b: LineRange | None
    group_id: int
    rank: int

    @property
    def range(self) -> LineRange:
        rng = self.range_a if self.kind != "B" else self.range_b
        assert rng is not None
        return rng


def build_items(groups: list[PriorityGroup],
                pairs_by_id: dict[int, DcbPair]) -> list[SuggestionItem]:
    items: list[SuggestionItem] = []
    for group in groups:
        for rank, bucket in enumerate(group.buckets):
            for node in bucket:
                if node.status == "Conflict":
                    lead = node.node_a or node.node_b
                    pair = pairs_by_id[lead.dcb_pair_id]
                    range_a = node.node_a.range if node.node_a else pair.dcb_a.range
                    range_b = node.node_b.range if node.node_b else pair.dcb_b.range
                    items.append(SuggestionItem(
                        kind="C",
                        applied=False,
                        name=lead.display_name,
                        qualified_name=lead.name,
                        file=lead.file,
                        range_a=range_a,
                        range_b=range_b,
                        group_id=group.group_id,
                        rank=rank,
                    ))
                else:
                    for fine in node.constituents():
                        items.append(SuggestionItem(
                            kind=fine.variant,
                            applied=fine.apply_state is ApplyState.APPLIED,
                            name=fine.display_name,
                            qualified_name=fine.name,
                            file=fine.file,
                            range_a=fine.range if fine.variant == "A" else None,
                            range_b=fine.range if fine.variant == "B" else None,
                            group_id=group.group_id,
                            rank=rank,
                        ))
    return items


def render_text(items: list[SuggestionItem], header: str = DEFAULT_HEADER) -> str:
    lines = [f"@@ {header} Result"]
    group_ids = sorted({item.group_id for item in items})
    for gid in group_ids:
        lines.append(f"@@ Group {gid}:")
        for item in (i for i in items if i.group_id == gid):
            indent = " " * (4 + 2 * item.rank)
            lines.append(f"@@{indent}|")
            applied = "(applied) " if item.kind != "C" and item.applied else ""
            if item.kind == "C":
                ranges = f"{item.range_a.fmt()}, {item.range_b.fmt()}"
            else:
                ranges = item.range.fmt()
            lines.append(f"@@{indent}{item.kind}-- {applied}{item.name} "
                         f"{item.file} {ranges}")
    return "\n".join(lines) + "\n"


def _range_json(rng: LineRange | None) -> list[int] | None:
    return None if rng is None else [rng.start_line, rng.end_line]


def render_json(items: list[SuggestionItem]) -> dict:
    groups: dict[int, dict[int, list[dict]]] = {}
    for item in items:
        entry: dict = {"kind": item.kind}
        if item.kind != "C":
            entry["applied"] = item.applied
        entry.update({
            "name": item.name,
            "qualified_name": item.qualified_name,
            "file": item.file,
        })
        if item.kind == "C":
            entry["range_a"] = _range_json(item.range_a)
            entry["range_b"] = _range_json(item.range_b)
        else:
            entry["range"] = _range_json(item.range)
        entry["group"] = item.group_id
        entry["rank"] = item.rank
        groups.setdefault(item.group_id, {}).setdefault(item.rank, []).append(entry)
    return {
        "groups": [
            {
                "id": gid,
                "buckets": [bucket[rank] for rank in sorted(bucket)],
            }
            for gid, bucket in sorted(groups.items())
        ]
    }


_ITEM_RE = re.compile(
    r"^@@(?P<indent> +)(?P<kind>[CAB])-- (?P<applied>\(applied\) )?"
    r"(?P<name>\S+) (?P<file>\S+) (?P<ranges>.+)$")


def parse_text_report(text: str) -> list[dict]:
    """Parse a rendered text report back into item dicts (used to verify the
    renderer is lossless)."""
    items: list[dict] = []
    group_id = None
    for line in text.splitlines():
        if line.startswith("@@ Group "):
            group_id = int(line[len("@@ Group "):].rstrip(":"))
            continue
        m = _ITEM_RE.match(line)
        if not m:
            continue
        rank = (len(m.group("indent")) - 4) // 2
        ranges = [_parse_range(r.strip()) for r in m.group("ranges").split(",")]
        items.append({
            "kind": m.group("kind"),
            "applied": m.group("applied") is not None,
            "name": m.group("name"),
            "file": m.group("file"),
            "ranges": ranges,
            "group": group_id,
            "rank": rank,
        })
    return items


def _parse_range(text: str) -> LineRange:
    if text.startswith("@"):
        return LineRange.empty_at(int(text[1:]))
    start, end = text.split("-")
    return LineRange(int(start), int(end))
