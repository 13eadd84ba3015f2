from __future__ import annotations

import random

from wizardmerge import (
    DefinitionIndicator,
    DefinitionKind,
    LineRange,
    MetadataSet,
    NodeKind,
    RawDependency,
    build_odg,
    extract_source,
)

ALLOWED = {"TN-TN", "GN-TN", "FN-TN", "FN-GN", "FN-FN"}


def meta_of(kinds: list[DefinitionKind], deps: list[tuple[int, int]],
            parents: dict[int, int] | None = None) -> MetadataSet:
    parents = parents or {}
    defs = []
    line = 1
    spans = {}
    for i, kind in enumerate(kinds):
        spans[i] = (line, line + 1)
        line += 3
    # parents must contain their children: widen parent ranges
    for child, parent in parents.items():
        lo = min(spans[parent][0], spans[child][0] - 1)
        hi = max(spans[parent][1], spans[child][1] + 1)
        spans[parent] = (lo, hi)
    for i, kind in enumerate(kinds):
        defs.append(DefinitionIndicator(
            i, f"d{i}", kind, "x.c", LineRange(*spans[i]),
            parent=parents.get(i)))
    return MetadataSet("A", tuple(defs),
                       tuple(RawDependency(a, b) for a, b in deps))


def test_direct_mapping_example():
    meta = extract_source([
        ("a.c", "struct S { int x; };\nS g;\nint f() { return g.x; }\n")])
    odg = build_odg(meta)
    kinds = {n.name: n.kind for n in odg.nodes}
    assert kinds == {"S": NodeKind.TN, "g": NodeKind.GN, "f": NodeKind.FN}
    classes = {e.edge_class for e in odg.edges}
    assert classes == {"GN-TN", "FN-GN"}


def test_member_function_gets_parent_edge():
    meta = meta_of([DefinitionKind.TYPE, DefinitionKind.FUNCTION], [],
                   parents={1: 0})
    odg = build_odg(meta)
    assert any(e.from_id == 1 and e.to_id == 0 and e.edge_class == "FN-TN"
               for e in odg.edges)


def test_disallowed_dependency_dropped_with_tally():
    meta = meta_of([DefinitionKind.TYPE, DefinitionKind.FUNCTION], [(0, 1)])
    odg = build_odg(meta)
    assert odg.edges == ()
    assert odg.dropped_count == 1
    assert odg.dropped == ((0, 1),)


def test_gn_gn_dropped():
    meta = meta_of([DefinitionKind.GLOBAL, DefinitionKind.GLOBAL], [(0, 1)])
    odg = build_odg(meta)
    assert odg.edges == ()
    assert odg.dropped_count == 1


def test_duplicate_edges_dedup():
    meta = meta_of([DefinitionKind.FUNCTION, DefinitionKind.GLOBAL],
                   [(0, 1), (0, 1)])
    odg = build_odg(meta)
    assert len(odg.edges) == 1


def test_parent_edge_dedups_with_explicit_dependency():
    meta = meta_of([DefinitionKind.TYPE, DefinitionKind.FUNCTION], [(1, 0)],
                   parents={1: 0})
    odg = build_odg(meta)
    assert len(odg.edges) == 1


def test_edge_class_totality_on_random_metadata():
    rng = random.Random(5)
    kinds_pool = list(DefinitionKind)
    for _ in range(300):
        n = rng.randint(1, 8)
        kinds = [rng.choice(kinds_pool) for _ in range(n)]
        deps = []
        for _ in range(rng.randint(0, 12)):
            a, b = rng.randrange(n), rng.randrange(n)
            if a != b:
                deps.append((a, b))
        odg = build_odg(meta_of(kinds, sorted(set(deps))))
        assert len(odg.nodes) == n
        for edge in odg.edges:
            assert edge.edge_class in ALLOWED
            assert edge.edge_class == (
                f"{odg.node(edge.from_id).kind.value}-"
                f"{odg.node(edge.to_id).kind.value}")
            assert not (odg.node(edge.from_id).kind is NodeKind.TN
                        and odg.node(edge.to_id).kind is NodeKind.FN)
        # every input dep is either an edge or dropped
        retained = {(e.from_id, e.to_id) for e in odg.edges}
        for dep in odg.dropped:
            assert dep not in retained
