from __future__ import annotations

import functools
import random

import pytest

from wizardmerge import (
    AlignedPair,
    ApplyState,
    FineNode,
    LineRange,
    MirrorLink,
    NodeKind,
    Sdg,
    SdgEdge,
)

_ACCEPTANCE_RESULTS: dict[str, str] = {}


def record_acceptance(name: str) -> None:
    """Mark an acceptance criterion as passed (tests call this last)."""
    _ACCEPTANCE_RESULTS[name] = "PASS"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{name}: {_ACCEPTANCE_RESULTS[name]}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or report.passed:
        return
    name = getattr(item.function, "_acceptance_name", None)
    if name:
        _ACCEPTANCE_RESULTS[name] = "FAIL"


def acceptance(name: str):
    """Decorator tying a test to one printed acceptance line."""

    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            result = fn(*args, **kwargs)
            record_acceptance(name)
            return result

        inner._acceptance_name = name
        return inner

    return wrap


# --- synthetic SDG construction ----------------------------------------------

_STATE = {
    "A": ApplyState.APPLIED,
    "N": ApplyState.NOT_APPLIED,
    "C": ApplyState.CONFLICT,
}


class SyntheticAligned:
    """Builds an AlignedPair out of a compact pair-by-pair description."""

    def __init__(self):
        self.nodes: dict[str, list[FineNode]] = {"A": [], "B": []}
        self.links: list[MirrorLink] = []
        self.edges: dict[str, list[SdgEdge]] = {"A": [], "B": []}
        self._pair_id = 0

    def pair(self, name: str, a_state: str | None, b_state: str | None,
             matched: bool = False, file: str = "x.c") -> tuple:
        """One DCB pair: per-side apply state ('A'/'N'/'C', None = no node)."""
        pid = self._pair_id
        self._pair_id += 1
        made = {}
        for variant, state in (("A", a_state), ("B", b_state)):
            if state is None:
                made[variant] = None
                continue
            line = 10 * pid + 1
            node = FineNode(
                fine_id=len(self.nodes[variant]),
                variant=variant,
                def_id=pid,
                kind=NodeKind.FN,
                name=name,
                file=file,
                range=LineRange(line, line + 1),
                dcb_pair_id=pid,
                apply_state=_STATE[state],
            )
            self.nodes[variant].append(node)
            made[variant] = node
        self.links.append(MirrorLink(made["A"], made["B"], matched))
        return made["A"], made["B"]

    def edge(self, src: FineNode, dst: FineNode, kind: str = "dep") -> None:
        assert src.variant == dst.variant
        self.edges[src.variant].append(SdgEdge(src.fine_id, dst.fine_id, kind))

    def build(self) -> AlignedPair:
        return AlignedPair(
            sdg_a=Sdg("A", tuple(self.nodes["A"]), tuple(self.edges["A"])),
            sdg_b=Sdg("B", tuple(self.nodes["B"]), tuple(self.edges["B"])),
            links=tuple(self.links),
        )


def random_synthetic(rng: random.Random, max_pairs: int = 5,
                     max_edges: int = 8) -> SyntheticAligned:
    """Random small SDG pair honoring the state pairing rules."""
    syn = SyntheticAligned()
    made = []
    for i in range(rng.randint(1, max_pairs)):
        shape = rng.random()
        if shape < 0.15:
            a_state, b_state = "A", None
        elif shape < 0.3:
            a_state, b_state = None, "N"
        elif shape < 0.45:
            a_state, b_state = "C", "C"
        elif shape < 0.75:
            a_state, b_state = "A", "N"
        else:
            a_state, b_state = "N", "A"
        both = a_state is not None and b_state is not None
        matched = both and "C" not in (a_state, b_state) and rng.random() < 0.5
        made.append(syn.pair(f"def{i}", a_state, b_state, matched))
    for _ in range(rng.randint(0, max_edges)):
        variant = rng.randrange(2)
        pool = [m[variant] for m in made if m[variant] is not None]
        if len(pool) < 2:
            continue
        src, dst = rng.sample(pool, 2)
        syn.edge(src, dst)
    return syn
