"""Minimum dependency graph and resolution-priority assignment.

Every mirror pair holding a conflicted or violated node becomes one MDG
node. From each such node the SDG is traversed outward along dependency
direction, hopping to the applied mirror whenever a not-applied node is
crossed (and fanning out over both sides of a conflict); safe nodes are
passed through without materializing them, so an MDG edge records that
some dependency chain leads from one interesting pair to another.

Cycles are condensed with Tarjan's algorithm, the condensed graph is
split into weakly-connected groups, and within each group nodes are
ranked dependencies-first: whatever everything else depends on lands in
the earliest bucket.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alignment import AlignedPair, ApplyState, FineNode, MirrorLink
from .violations import ViolationSet


@dataclass(frozen=True)
class MdgNode:
    node_a: FineNode | None
    node_b: FineNode | None
    status: str  # "Conflict" | "Violated"

    def constituents(self) -> list[FineNode]:
        return [n for n in (self.node_a, self.node_b) if n is not None]

    @property
    def sort_key(self) -> tuple[str, int, str]:
        return min(n.sort_key for n in self.constituents())

    @property
    def name(self) -> str:
        node = self.node_a or self.node_b
        return node.name


@dataclass(frozen=True)
class Mdg:
    nodes: tuple[MdgNode, ...]
    edges: tuple[tuple[int, int], ...]  # indexes into nodes


@dataclass(frozen=True)
class PriorityGroup:
    group_id: int
    buckets: tuple[tuple[MdgNode, ...], ...]  # bucket 0 resolves first


def _interesting(link: MirrorLink, violations: ViolationSet) -> bool:
    return any(
        n.apply_state is ApplyState.CONFLICT or violations.is_violated(n)
        for n in link.constituents()
    )


def build_mdg(aligned: AlignedPair, violations: ViolationSet) -> Mdg:
    """MDG nodes for interesting mirror pairs; edges from side-switching
    reachability through safe nodes only."""
    interesting = [link for link in aligned.links
                   if _interesting(link, violations)]
    node_of_link: dict[int, int] = {}
    nodes: list[MdgNode] = []
    link_order = sorted(
        range(len(interesting)),
        key=lambda i: min(n.sort_key for n in interesting[i].constituents()))
    for rank, idx in enumerate(link_order):
        link = interesting[idx]
        status = ("Conflict"
                  if any(n.apply_state is ApplyState.CONFLICT
                         for n in link.constituents())
                  else "Violated")
        nodes.append(MdgNode(link.node_a, link.node_b, status))
        node_of_link[id(link)] = rank

    def mdg_index(node: FineNode) -> int | None:
        link = aligned.link_of(node)
        return node_of_link.get(id(link))

    adjacency = {
        "A": _adjacency(aligned.sdg_a),
        "B": _adjacency(aligned.sdg_b),
    }

    def successors(node: FineNode) -> list[FineNode]:
        sdg = aligned.sdg_a if node.variant == "A" else aligned.sdg_b
        return [sdg.node(t) for t in adjacency[node.variant].get(node.fine_id, ())]

    def traversal_starts(mdg_node: MdgNode) -> list[FineNode]:
        if mdg_node.status == "Conflict":
            return mdg_node.constituents()
        return [n for n in mdg_node.constituents()
                if n.apply_state is ApplyState.APPLIED]

    def pass_through(node: FineNode) -> list[FineNode]:
        if node.apply_state is ApplyState.APPLIED:
            return [node]
        mirror = aligned.link_of(node).mirror_of(node)
        return [mirror] if mirror is not None else []

    edges: set[tuple[int, int]] = set()
    for src_idx, mdg_node in enumerate(nodes):
        seen: set[tuple[str, int]] = set()
        frontier = list(traversal_starts(mdg_node))
        while frontier:
            current = frontier.pop()
            key = (current.variant, current.fine_id)
            if key in seen:
                continue
            seen.add(key)
            for succ in successors(current):
                target = mdg_index(succ)
                if target is not None:
                    if target != src_idx:
                        edges.add((src_idx, target))
                    continue
                frontier.extend(pass_through(succ))
    return Mdg(tuple(nodes), tuple(sorted(edges)))


def _adjacency(sdg) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {}
    for edge in sdg.edges:
        adj.setdefault(edge.from_fine, []).append(edge.to_fine)
    return adj


def tarjan_scc(n: int, adjacency: dict[int, list[int]]) -> list[list[int]]:
    """Strongly connected components, iterative, in reverse topological
    order of the condensation (callees before callers)."""
    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    sccs: list[list[int]] = []

    for root in range(n):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            neighbors = adjacency.get(v, [])
            while pi < len(neighbors):
                w = neighbors[pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if lowlink[v] == index[v]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    scc.append(w)
                    if w == v:
                        break
                sccs.append(scc)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return sccs


def condense_and_rank(mdg: Mdg) -> list[PriorityGroup]:
    """Condense cycles, split into connectivity groups, rank buckets
    dependencies-first (sinks of the dependency direction get rank 0)."""
    n = len(mdg.nodes)
    adjacency: dict[int, list[int]] = {}
    for a, b in mdg.edges:
        adjacency.setdefault(a, []).append(b)

    sccs = tarjan_scc(n, adjacency)
    scc_of = [0] * n
    for scc_idx, members in enumerate(sccs):
        for v in members:
            scc_of[v] = scc_idx

    cond_adj: dict[int, set[int]] = {i: set() for i in range(len(sccs))}
    undirected: dict[int, set[int]] = {i: set() for i in range(len(sccs))}
    for a, b in mdg.edges:
        ca, cb = scc_of[a], scc_of[b]
        if ca != cb:
            cond_adj[ca].add(cb)
            undirected[ca].add(cb)
            undirected[cb].add(ca)

    # rank = longest path toward the sinks (resolve the deepest dependency first)
    rank = [-1] * len(sccs)
    for scc_idx in range(len(sccs)):  # reverse topological order already
        succ_ranks = [rank[t] for t in cond_adj[scc_idx]]
        rank[scc_idx] = max(succ_ranks, default=-1) + 1

    component = [-1] * len(sccs)
    n_components = 0
    for start in range(len(sccs)):
        if component[start] != -1:
            continue
        todo = [start]
        component[start] = n_components
        while todo:
            v = todo.pop()
            for w in undirected[v]:
                if component[w] == -1:
                    component[w] = n_components
                    todo.append(w)
        n_components += 1

    groups: list[list[tuple[tuple, int, MdgNode]]] = [[] for _ in range(n_components)]
    for scc_idx, members in enumerate(sccs):
        for v in members:
            node = mdg.nodes[v]
            groups[component[scc_idx]].append((node.sort_key, rank[scc_idx], node))

    keyed = sorted(groups, key=lambda g: min(e[0] for e in g))
    out: list[PriorityGroup] = []
    for group_id, entries in enumerate(keyed):
        max_rank = max(r for _, r, _ in entries)
        buckets: list[list[MdgNode]] = [[] for _ in range(max_rank + 1)]
        for key, r, node in sorted(entries, key=lambda e: e[0]):
            buckets[r].append(node)
        out.append(PriorityGroup(
            group_id, tuple(tuple(b) for b in buckets)))
    return out
