"""Graph-text alignment: attach diff code blocks to dependency-graph nodes.

Every non-empty DCB is intersected with the definitions covering its lines
(innermost definition per line). Each intersection becomes a fine-grained
node carrying the DCB's apply state; fine nodes of one definition are
chained in range order (later code depends on earlier code of the same
definition); definition-level dependency edges fan out over the fine nodes
of both endpoints. Nodes of the two variants are paired into mirror links
through their shared DCB pair, and a link is *matched* only when it joins
same-named definitions whose pair carries identical text on both sides
(strict policy) or same-named definitions regardless of content
(``name-only`` policy).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .diff3 import DcbPair, LineRange, MergeOutcome, PairStatus
from .intervals import IntervalIndex
from .odg import NodeKind, Odg


class ApplyState(Enum):
    APPLIED = "Applied"
    NOT_APPLIED = "NotApplied"
    CONFLICT = "Conflict"


class MatchPolicy(Enum):
    STRICT = "strict"
    NAME_ONLY = "name-only"


@dataclass(frozen=True)
class FineNode:
    fine_id: int
    variant: str
    def_id: int
    kind: NodeKind
    name: str
    file: str
    range: LineRange
    dcb_pair_id: int
    apply_state: ApplyState

    @property
    def display_name(self) -> str:
        return self.name.rsplit("::", 1)[-1]

    @property
    def sort_key(self) -> tuple[str, int, str]:
        return (self.file, self.range.start_line, self.variant)


@dataclass(frozen=True)
class SdgEdge:
    from_fine: int
    to_fine: int
    kind: str  # "dep" | "chain"


@dataclass(frozen=True)
class Sdg:
    variant: str
    nodes: tuple[FineNode, ...]
    edges: tuple[SdgEdge, ...]

    def node(self, fine_id: int) -> FineNode:
        return self.nodes[fine_id]


@dataclass(frozen=True)
class MirrorLink:
    """Pairing of a fine node with its counterpart across variants.

    Either side may be absent (the paired DCB was empty or covered other
    definitions); an absent side always means unmatched.
    """

    node_a: FineNode | None
    node_b: FineNode | None
    matched: bool

    def mirror_of(self, node: FineNode) -> FineNode | None:
        return self.node_b if node.variant == "A" else self.node_a

    def constituents(self) -> list[FineNode]:
        return [n for n in (self.node_a, self.node_b) if n is not None]


def assign_apply_state(status: PairStatus, variant: str) -> ApplyState:
    """Apply state of the fine nodes on one side of a DCB pair.

    Identical changes are taken once from A, so the B side of an
    AppliedSame pair counts as not applied.
    """
    if status is PairStatus.CONFLICT:
        return ApplyState.CONFLICT
    if status is PairStatus.APPLIED_B:
        return ApplyState.APPLIED if variant == "B" else ApplyState.NOT_APPLIED
    return ApplyState.APPLIED if variant == "A" else ApplyState.NOT_APPLIED


def build_interval_indexes(odg: Odg, file_lines: dict[str, int]) -> dict[str, IntervalIndex]:
    """One interval index per file, colored by that file's definitions."""
    per_file: dict[str, list[tuple[int, LineRange]]] = {}
    for node in odg.nodes:
        per_file.setdefault(node.file, []).append((node.def_id, node.range))
    indexes: dict[str, IntervalIndex] = {}
    for file, defs in per_file.items():
        n_lines = file_lines.get(file, 0)
        n_lines = max(n_lines, max(r.end_line for _, r in defs))
        indexes[file] = IntervalIndex(defs, n_lines)
    return indexes


def split_and_chain(
    odg: Odg,
    pairs: list[DcbPair],
    indexes: dict[str, IntervalIndex],
    variant: str,
) -> tuple[list[FineNode], list[SdgEdge]]:
    """Fine nodes for every (definition, DCB) intersection plus chain edges.

    Empty DCBs and DCB lines outside any definition produce no node.
    """
    nodes: list[FineNode] = []
    for pair in sorted(pairs, key=lambda p: p.id):
        dcb = pair.side(variant)
        if dcb.range.is_empty:
            continue
        index = indexes.get(dcb.file)
        if index is None:
            continue
        for seg in index.query(dcb.range.start_line, dcb.range.end_line):
            owner = odg.node(seg.def_id)
            nodes.append(FineNode(
                fine_id=len(nodes),
                variant=variant,
                def_id=owner.def_id,
                kind=owner.kind,
                name=owner.name,
                file=owner.file,
                range=seg.range,
                dcb_pair_id=pair.id,
                apply_state=assign_apply_state(pair.status, variant),
            ))

    chains: list[SdgEdge] = []
    by_def: dict[int, list[FineNode]] = {}
    for node in nodes:
        by_def.setdefault(node.def_id, []).append(node)
    for def_id in sorted(by_def):
        run = sorted(by_def[def_id], key=lambda n: n.range.start_line)
        for earlier, later in zip(run, run[1:]):
            chains.append(SdgEdge(later.fine_id, earlier.fine_id, "chain"))
    return nodes, chains


def project_edges(odg: Odg, nodes: list[FineNode]) -> list[SdgEdge]:
    """Definition-level edges projected onto fine nodes (cartesian); edges
    toward definitions with no fine node vanish with them."""
    by_def: dict[int, list[FineNode]] = {}
    for node in nodes:
        by_def.setdefault(node.def_id, []).append(node)
    out: list[SdgEdge] = []
    for edge in odg.edges:
        sources = by_def.get(edge.from_id)
        targets = by_def.get(edge.to_id)
        if not sources or not targets:
            continue
        for src in sources:
            for dst in targets:
                out.append(SdgEdge(src.fine_id, dst.fine_id, "dep"))
    return out


def link_mirrors(
    fine_a: list[FineNode],
    fine_b: list[FineNode],
    pairs: list[DcbPair],
    policy: MatchPolicy = MatchPolicy.STRICT,
) -> list[MirrorLink]:
    """Mirror links across the two variants, one per fine node at least.

    Fine nodes aligned with the two DCBs of one pair are mirrored
    name-first (equal definition names zip in range order), remaining
    nodes pair positionally, and leftovers become one-sided links.
    """
    pair_by_id = {p.id: p for p in pairs}
    grouped: dict[int, tuple[list[FineNode], list[FineNode]]] = {}
    for node in fine_a:
        grouped.setdefault(node.dcb_pair_id, ([], []))[0].append(node)
    for node in fine_b:
        grouped.setdefault(node.dcb_pair_id, ([], []))[1].append(node)

    links: list[MirrorLink] = []
    for pair_id in sorted(grouped):
        side_a, side_b = grouped[pair_id]
        side_a.sort(key=lambda n: n.range.start_line)
        side_b.sort(key=lambda n: n.range.start_line)
        pair = pair_by_id[pair_id]
        texts_equal = pair.dcb_a.text == pair.dcb_b.text

        used_b: set[int] = set()
        pending: list[FineNode] = []
        matched_pairs: list[tuple[FineNode, FineNode]] = []
        by_name_b: dict[str, list[FineNode]] = {}
        for node in side_b:
            by_name_b.setdefault(node.name, []).append(node)
        for node in side_a:
            bucket = by_name_b.get(node.name)
            if bucket:
                twin = bucket.pop(0)
                used_b.add(twin.fine_id)
                matched_pairs.append((node, twin))
            else:
                pending.append(node)
        rest_b = [n for n in side_b if n.fine_id not in used_b]
        for node, twin in zip(pending, rest_b):
            matched_pairs.append((node, twin))
        lone_a = pending[len(rest_b):]
        lone_b = rest_b[len(pending):]

        for node, twin in sorted(matched_pairs,
                                 key=lambda p: p[0].range.start_line):
            names_equal = node.name == twin.name
            matched = names_equal and (
                policy is MatchPolicy.NAME_ONLY or texts_equal)
            links.append(MirrorLink(node, twin, matched))
        for node in lone_a:
            links.append(MirrorLink(node, None, False))
        for node in lone_b:
            links.append(MirrorLink(None, node, False))
    return links


@dataclass(frozen=True)
class AlignedPair:
    """Both shrunk dependency graphs plus their mirror links."""

    sdg_a: Sdg
    sdg_b: Sdg
    links: tuple[MirrorLink, ...]

    def link_of(self, node: FineNode) -> MirrorLink:
        return self._by_node[(node.variant, node.fine_id)]

    @cached_property
    def _by_node(self) -> dict[tuple[str, int], MirrorLink]:
        by_node: dict[tuple[str, int], MirrorLink] = {}
        for link in self.links:
            for node in link.constituents():
                by_node[(node.variant, node.fine_id)] = link
        return by_node


def align(
    odg_a: Odg,
    odg_b: Odg,
    outcomes: list[MergeOutcome],
    file_lines_a: dict[str, int],
    file_lines_b: dict[str, int],
    policy: MatchPolicy = MatchPolicy.STRICT,
) -> AlignedPair:
    """Run the full alignment for all merged files of two candidates."""
    pairs = [p for outcome in outcomes for p in outcome.pairs]
    idx_a = build_interval_indexes(odg_a, file_lines_a)
    idx_b = build_interval_indexes(odg_b, file_lines_b)
    nodes_a, chains_a = split_and_chain(odg_a, pairs, idx_a, "A")
    nodes_b, chains_b = split_and_chain(odg_b, pairs, idx_b, "B")
    edges_a = chains_a + project_edges(odg_a, nodes_a)
    edges_b = chains_b + project_edges(odg_b, nodes_b)
    links = link_mirrors(nodes_a, nodes_b, pairs, policy)
    return AlignedPair(
        sdg_a=Sdg("A", tuple(nodes_a), tuple(dict.fromkeys(edges_a))),
        sdg_b=Sdg("B", tuple(nodes_b), tuple(dict.fromkeys(edges_b))),
        links=tuple(links),
    )
