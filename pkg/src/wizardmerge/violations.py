"""Edge-sensitive detection of silently misapplied diff code blocks.

Every dependency edge (v, u) in either shrunk graph is classified into one
of six scenarios once its source is applied or conflicted:

    1. v applied,    u applied                              -> safe
    2. v applied,    u not applied/conflict, matched mirror -> safe
       (the dependency is satisfied across variants by u's mirror)
    3. v conflicted, u applied                              -> safe
    4. v conflicted, u not applied/conflict, matched mirror -> safe
    5. v applied,    u not applied/conflict, unmatched      -> violated
    6. v conflicted, u not applied/conflict, unmatched      -> violated

A violated edge marks v, u and both their mirrors (where present).
Conflicted nodes count as violated regardless of any edge verdict.
Edges whose source is not applied are skipped; the mirror side covers them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alignment import AlignedPair, ApplyState, FineNode, SdgEdge


@dataclass(frozen=True)
class Verdict:
    variant: str
    edge: SdgEdge
    scenario: int
    safe: bool
    marked: tuple[FineNode, ...]


@dataclass(frozen=True)
class ViolationSet:
    violated_a: frozenset[int]  # fine ids in variant A
    violated_b: frozenset[int]
    verdicts: tuple[Verdict, ...]
    conflict_pair_ids: frozenset[int]
    violated_dcbs: frozenset[tuple[int, str]]  # (pair id, variant)

    def is_violated(self, node: FineNode) -> bool:
        pool = self.violated_a if node.variant == "A" else self.violated_b
        return node.fine_id in pool


def classify_edge(v: FineNode, u: FineNode, aligned: AlignedPair,
                  edge_kind: str = "dep") -> Verdict:
    """Classify one SDG edge; the caller guarantees v is applied or conflicted."""
    assert v.apply_state is not ApplyState.NOT_APPLIED
    edge = SdgEdge(v.fine_id, u.fine_id, edge_kind)
    v_conflict = v.apply_state is ApplyState.CONFLICT
    if u.apply_state is ApplyState.APPLIED:
        return Verdict(v.variant, edge, 3 if v_conflict else 1, True, ())
    if aligned.link_of(u).matched:
        return Verdict(v.variant, edge, 4 if v_conflict else 2, True, ())
    marked = [v, u]
    for node in (v, u):
        mirror = aligned.link_of(node).mirror_of(node)
        if mirror is not None:
            marked.append(mirror)
    return Verdict(v.variant, edge, 6 if v_conflict else 5, False, tuple(marked))


def detect_violations(aligned: AlignedPair) -> ViolationSet:
    """Classify every edge of both SDGs and collect the violated nodes."""
    verdicts: list[Verdict] = []
    violated: dict[str, set[int]] = {"A": set(), "B": set()}
    conflict_pairs: set[int] = set()

    for sdg in (aligned.sdg_a, aligned.sdg_b):
        for node in sdg.nodes:
            if node.apply_state is ApplyState.CONFLICT:
                violated[node.variant].add(node.fine_id)
                conflict_pairs.add(node.dcb_pair_id)
        for edge in sdg.edges:
            v = sdg.node(edge.from_fine)
            u = sdg.node(edge.to_fine)
            if v.apply_state is ApplyState.NOT_APPLIED:
                continue
            verdict = classify_edge(v, u, aligned, edge.kind)
            verdicts.append(verdict)
            for marked in verdict.marked:
                violated[marked.variant].add(marked.fine_id)

    owned = {(pid, v) for pid in conflict_pairs for v in "AB"}
    for sdg in (aligned.sdg_a, aligned.sdg_b):
        pool = violated[sdg.variant]
        for node in sdg.nodes:
            if node.fine_id in pool:
                owned.add((node.dcb_pair_id, node.variant))

    return ViolationSet(
        violated_a=frozenset(violated["A"]),
        violated_b=frozenset(violated["B"]),
        verdicts=tuple(verdicts),
        conflict_pair_ids=frozenset(conflict_pairs),
        violated_dcbs=frozenset(owned),
    )


def verdicts_to_dicts(violations: ViolationSet) -> list[dict]:
    return [
        {
            "variant": v.variant,
            "from": v.edge.from_fine,
            "to": v.edge.to_fine,
            "kind": v.edge.kind,
            "scenario": v.scenario,
            "safe": v.safe,
            "marked": [
                {"variant": n.variant, "fine_id": n.fine_id} for n in v.marked
            ],
        }
        for v in violations.verdicts
    ]
