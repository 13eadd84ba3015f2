"""Overall dependency graph for one merge candidate.

One typed node per named definition (TN for composite types, GN for
globals, FN for functions) and one typed edge per retained dependency.
Only five edge classes exist; a dependency whose endpoint kinds fall
outside them is dropped and tallied instead of rejected, so hand-written
metadata degrades gracefully. A member function additionally depends on
its enclosing type (never the other way around: no edge leaves a TN
toward an FN).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .diff3 import LineRange
from .metadata import DefinitionKind, MetadataSet


class NodeKind(Enum):
    TN = "TN"
    GN = "GN"
    FN = "FN"


_KIND_MAP = {
    DefinitionKind.TYPE: NodeKind.TN,
    DefinitionKind.GLOBAL: NodeKind.GN,
    DefinitionKind.FUNCTION: NodeKind.FN,
}

_ALLOWED_CLASSES = {
    (NodeKind.TN, NodeKind.TN): "TN-TN",
    (NodeKind.GN, NodeKind.TN): "GN-TN",
    (NodeKind.FN, NodeKind.TN): "FN-TN",
    (NodeKind.FN, NodeKind.GN): "FN-GN",
    (NodeKind.FN, NodeKind.FN): "FN-FN",
}


@dataclass(frozen=True)
class OdgNode:
    def_id: int
    kind: NodeKind
    name: str
    file: str
    range: LineRange
    parent: int | None = None

    @property
    def display_name(self) -> str:
        return self.name.rsplit("::", 1)[-1]


@dataclass(frozen=True)
class OdgEdge:
    from_id: int
    to_id: int
    edge_class: str


@dataclass(frozen=True)
class Odg:
    variant: str
    nodes: tuple[OdgNode, ...]
    edges: tuple[OdgEdge, ...]
    dropped: tuple[tuple[int, int], ...] = field(default=())

    @property
    def dropped_count(self) -> int:
        return len(self.dropped)

    def node(self, def_id: int) -> OdgNode:
        return self.nodes[def_id]


def edge_class_for(from_kind: NodeKind, to_kind: NodeKind) -> str | None:
    return _ALLOWED_CLASSES.get((from_kind, to_kind))


def build_odg(meta: MetadataSet) -> Odg:
    """Build the dependency graph for one validated metadata set."""
    nodes = tuple(
        OdgNode(
            def_id=d.def_id,
            kind=_KIND_MAP[d.kind],
            name=d.name,
            file=d.file,
            range=d.range,
            parent=d.parent,
        )
        for d in sorted(meta.definitions, key=lambda d: d.def_id)
    )

    edges: set[tuple[int, int, str]] = set()
    dropped: list[tuple[int, int]] = []
    for dep in meta.dependencies:
        cls = edge_class_for(nodes[dep.from_id].kind, nodes[dep.to_id].kind)
        if cls is None:
            dropped.append((dep.from_id, dep.to_id))
        else:
            edges.add((dep.from_id, dep.to_id, cls))
    for node in nodes:
        if node.parent is not None and node.kind is NodeKind.FN:
            edges.add((node.def_id, node.parent, "FN-TN"))

    return Odg(
        variant=meta.variant,
        nodes=nodes,
        edges=tuple(OdgEdge(*e) for e in sorted(edges)),
        dropped=tuple(sorted(dropped)),
    )


def odg_to_dict(odg: Odg) -> dict:
    return {
        "variant": odg.variant,
        "nodes": [
            {
                "id": n.def_id,
                "kind": n.kind.value,
                "name": n.name,
                "file": n.file,
                "start_line": n.range.start_line,
                "end_line": n.range.end_line,
            }
            for n in odg.nodes
        ],
        "edges": [
            {"from": e.from_id, "to": e.to_id, "class": e.edge_class}
            for e in odg.edges
        ],
        "dropped_dependencies": [list(d) for d in odg.dropped],
    }
