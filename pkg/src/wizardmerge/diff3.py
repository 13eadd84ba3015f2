"""Line-level three-way merging.

Computes per-variant diffs against a common base, pairs up the changed
regions of both variants, applies the usual merge rules (one side changed:
apply it; both changed identically: apply once; both changed differently:
conflict), and renders the merged text with Git-style conflict markers.

Alignment is canonical: the diff walks base and variant front to back,
matching lines whenever they are equal (which always preserves a maximum
common subsequence) and otherwise consuming from whichever side keeps the
remaining common subsequence longest, preferring the base side on ties.
This makes hunk boundaries a pure function of the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

CONFLICT_START = "<<<<<<< A"
CONFLICT_SEP = "======="
CONFLICT_END = ">>>>>>> B"


@dataclass(frozen=True, order=True)
class LineRange:
    """Inclusive 1-based line range; ``end_line == start_line - 1`` encodes an
    empty range anchored just before ``start_line``."""

    start_line: int
    end_line: int

    def __post_init__(self) -> None:
        if self.end_line < self.start_line - 1:
            raise ValueError(f"malformed range {self.start_line}..{self.end_line}")

    @classmethod
    def empty_at(cls, anchor: int) -> "LineRange":
        return cls(anchor, anchor - 1)

    @property
    def is_empty(self) -> bool:
        return self.end_line < self.start_line

    def __len__(self) -> int:
        return self.end_line - self.start_line + 1

    def contains(self, other: "LineRange") -> bool:
        return self.start_line <= other.start_line and other.end_line <= self.end_line

    def fmt(self) -> str:
        if self.is_empty:
            return f"@{self.start_line}"
        return f"{self.start_line}-{self.end_line}"


class PairStatus(Enum):
    APPLIED_A = "AppliedA"
    APPLIED_B = "AppliedB"
    APPLIED_SAME = "AppliedSame"
    CONFLICT = "Conflict"


@dataclass(frozen=True)
class Dcb:
    """One variant's side of a diff code block: the exact lines it holds in
    that variant's file (empty for a pure deletion)."""

    file: str
    variant: str  # "A" or "B"
    range: LineRange
    text: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.text) != len(self.range):
            raise ValueError("DCB text length does not match its range")


@dataclass(frozen=True)
class DcbPair:
    id: int
    dcb_a: Dcb
    dcb_b: Dcb
    base_range: LineRange
    status: PairStatus

    def side(self, variant: str) -> Dcb:
        return self.dcb_a if variant == "A" else self.dcb_b


@dataclass(frozen=True)
class DiffHunk:
    """A maximal run of changed lines: ``base_range`` is replaced by
    ``variant_lines`` (either side may be empty, not both)."""

    base_range: LineRange
    variant_range: LineRange
    variant_lines: tuple[str, ...]


@dataclass(frozen=True)
class MergeOutcome:
    file: str
    merged_text: str
    pairs: tuple[DcbPair, ...]
    merged_ranges: dict[int, LineRange] = field(hash=False, default_factory=dict)

    @property
    def has_conflicts(self) -> bool:
        return any(p.status is PairStatus.CONFLICT for p in self.pairs)


def split_lines(text: str) -> list[str]:
    """Split into lines without terminators; no phantom final empty line."""
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return lines


def _raw_lines(text: str) -> list[str]:
    """Like ``split_lines`` but each line keeps its ``\\n`` (the final line
    keeps whatever it had, possibly nothing)."""
    if not text:
        return []
    lines = text.split("\n")
    last = lines.pop()
    raw = [ln + "\n" for ln in lines]
    if last != "":
        raw.append(last)
    return raw


def _suffix_lcs_table(a_ids: np.ndarray, b_ids: np.ndarray) -> np.ndarray:
    """table[i, j] = length of the LCS of a[i:] and b[j:]."""
    n, m = len(a_ids), len(b_ids)
    dtype = np.uint16 if min(n, m) < 0xFFFF else np.uint32
    table = np.zeros((n + 1, m + 1), dtype=dtype)
    for i in range(n - 1, -1, -1):
        nxt = table[i + 1]
        cand = np.where(b_ids == a_ids[i], nxt[1:] + 1, 0)
        cand = np.maximum(cand, nxt[:-1])
        table[i, :m] = np.maximum.accumulate(cand[::-1])[::-1]
    return table


def diff_lines(base: str, variant: str) -> list[DiffHunk]:
    """Minimal ordered hunks turning ``base`` into ``variant``.

    Line equality is exact content equality after stripping the line
    terminator. Concatenating the unchanged regions with the hunks'
    variant lines reconstructs ``variant`` exactly.
    """
    a = split_lines(base)
    b = split_lines(variant)
    n, m = len(a), len(b)

    pre = 0
    while pre < n and pre < m and a[pre] == b[pre]:
        pre += 1
    suf = 0
    while suf < n - pre and suf < m - pre and a[n - 1 - suf] == b[m - 1 - suf]:
        suf += 1

    core_a = a[pre:n - suf]
    core_b = b[pre:m - suf]
    interned: dict[str, int] = {}
    a_ids = np.fromiter((interned.setdefault(s, len(interned)) for s in core_a),
                        dtype=np.int64, count=len(core_a))
    b_ids = np.fromiter((interned.setdefault(s, len(interned)) for s in core_b),
                        dtype=np.int64, count=len(core_b))
    table = _suffix_lcs_table(a_ids, b_ids)

    hunks: list[DiffHunk] = []
    cn, cm = len(core_a), len(core_b)
    i = j = 0
    hi = hj = 0
    in_hunk = False

    def close(end_i: int, end_j: int) -> None:
        base_rng = (LineRange(pre + hi + 1, pre + end_i)
                    if end_i > hi else LineRange.empty_at(pre + hi + 1))
        var_rng = (LineRange(pre + hj + 1, pre + end_j)
                   if end_j > hj else LineRange.empty_at(pre + hj + 1))
        hunks.append(DiffHunk(base_rng, var_rng, tuple(core_b[hj:end_j])))

    while i < cn or j < cm:
        if i < cn and j < cm and core_a[i] == core_b[j]:
            if in_hunk:
                close(i, j)
                in_hunk = False
            i += 1
            j += 1
            continue
        if not in_hunk:
            hi, hj = i, j
            in_hunk = True
        if i < cn and (j >= cm or table[i + 1, j] >= table[i, j + 1]):
            i += 1
        else:
            j += 1
    if in_hunk:
        close(cn, cm)
    return hunks


def _boundary_shift(hunks: list[DiffHunk], boundary: int, at_end: bool) -> int:
    """Map a base boundary (position before line ``boundary``) to the variant.

    ``at_end`` controls whether an insertion anchored exactly at the boundary
    counts as lying before it (it does for a region's end, not its start).
    """
    shift = 0
    for h in hunks:
        b_end = h.base_range.end_line + 1  # exclusive boundary after the hunk
        b_start = h.base_range.start_line
        if b_end < boundary or (b_end == boundary and (b_start < boundary or at_end)):
            shift += len(h.variant_range) - len(h.base_range)
        else:
            break
    return shift


@dataclass(frozen=True)
class _Group:
    base_start: int  # half-open [base_start, base_end) over boundaries
    base_end: int
    from_a: bool
    from_b: bool


def _coalesce(hunks_a: list[DiffHunk], hunks_b: list[DiffHunk]) -> list[_Group]:
    # Half-open base intervals; overlapping or touching intervals (from either
    # variant) collapse into one group, transitively.
    events = []
    for variant, hunks in (("A", hunks_a), ("B", hunks_b)):
        for h in hunks:
            events.append((h.base_range.start_line, h.base_range.end_line + 1, variant))
    events.sort()
    groups: list[_Group] = []
    for start, end, variant in events:
        if groups and start <= groups[-1].base_end:
            last = groups[-1]
            groups[-1] = _Group(last.base_start, max(last.base_end, end),
                                last.from_a or variant == "A",
                                last.from_b or variant == "B")
        else:
            groups.append(_Group(start, end, variant == "A", variant == "B"))
    return groups


def three_way_merge(base: str, a: str, b: str, file: str = "") -> MergeOutcome:
    """Merge two variants against their common base.

    Changed regions of the two variants are paired by overlapping-or-adjacent
    base ranges (transitively coalesced). A region changed on one side is
    applied; identical changes are applied once (from A); divergent changes
    become a conflict wrapped in Git-style markers.
    """
    hunks_a = diff_lines(base, a)
    hunks_b = diff_lines(base, b)
    groups = _coalesce(hunks_a, hunks_b)

    base_lines = split_lines(base)
    a_lines = split_lines(a)
    b_lines = split_lines(b)
    base_raw = _raw_lines(base)
    a_raw = _raw_lines(a)
    b_raw = _raw_lines(b)

    chunks: list[str] = []
    line_count = 0  # completed ("\n"-terminated) merged lines so far

    def emit_raw(raw: list[str]) -> None:
        nonlocal line_count
        if raw and chunks and not chunks[-1].endswith("\n"):
            chunks.append("\n")
            line_count += 1
        chunks.extend(raw)
        line_count += sum(c.count("\n") for c in raw)

    def emit_marker(marker: str) -> None:
        nonlocal line_count
        if chunks and not chunks[-1].endswith("\n"):
            chunks.append("\n")
            line_count += 1
        chunks.append(marker + "\n")
        line_count += 1

    def merged_pos() -> int:
        dangling = 1 if chunks and not chunks[-1].endswith("\n") else 0
        return line_count + dangling + 1

    pairs: list[DcbPair] = []
    merged_ranges: dict[int, LineRange] = {}
    cursor = 1  # next unconsumed base line

    def variant_region(hunks: list[DiffHunk], g: _Group) -> tuple[int, int]:
        vs = g.base_start + _boundary_shift(hunks, g.base_start, at_end=False)
        ve = g.base_end + _boundary_shift(hunks, g.base_end, at_end=True)
        return vs, ve

    for pair_id, g in enumerate(groups):
        emit_raw(base_raw[cursor - 1:g.base_start - 1])
        cursor = g.base_end

        avs, ave = variant_region(hunks_a, g)
        bvs, bve = variant_region(hunks_b, g)
        a_text = tuple(a_lines[avs - 1:ave - 1])
        b_text = tuple(b_lines[bvs - 1:bve - 1])
        a_range = LineRange(avs, ave - 1) if ave > avs else LineRange.empty_at(avs)
        b_range = LineRange(bvs, bve - 1) if bve > bvs else LineRange.empty_at(bvs)
        base_range = (LineRange(g.base_start, g.base_end - 1)
                      if g.base_end > g.base_start
                      else LineRange.empty_at(g.base_start))

        if g.from_a and g.from_b:
            status = PairStatus.APPLIED_SAME if a_text == b_text else PairStatus.CONFLICT
        elif g.from_a:
            status = PairStatus.APPLIED_A
        else:
            status = PairStatus.APPLIED_B

        start_pos = merged_pos()
        if status is PairStatus.CONFLICT:
            emit_marker(CONFLICT_START)
            emit_raw(a_raw[avs - 1:ave - 1])
            emit_marker(CONFLICT_SEP)
            emit_raw(b_raw[bvs - 1:bve - 1])
            emit_marker(CONFLICT_END)
        elif status is PairStatus.APPLIED_B:
            emit_raw(b_raw[bvs - 1:bve - 1])
        else:  # AppliedA / AppliedSame: text taken from A
            emit_raw(a_raw[avs - 1:ave - 1])
        end_pos = merged_pos()

        pairs.append(DcbPair(
            id=pair_id,
            dcb_a=Dcb(file, "A", a_range, a_text),
            dcb_b=Dcb(file, "B", b_range, b_text),
            base_range=base_range,
            status=status,
        ))
        merged_ranges[pair_id] = (LineRange(start_pos, end_pos - 1)
                                  if end_pos > start_pos
                                  else LineRange.empty_at(start_pos))

    emit_raw(base_raw[cursor - 1:])
    return MergeOutcome(file=file, merged_text="".join(chunks),
                        pairs=tuple(pairs), merged_ranges=merged_ranges)
