"""Segment tree assigning definition "colors" to line intervals.

Each file's definitions paint their line ranges; nested definitions are
painted innermost-last so a line is owned by the smallest definition
containing it. A range query walks the tree in O(log n) per reported
segment and returns the owned sub-intervals intersecting the query,
adjacent same-color pieces merged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diff3 import LineRange


class IntervalQueryError(ValueError):
    pass


@dataclass(frozen=True)
class ColoredSegment:
    def_id: int
    range: LineRange


class IntervalIndex:
    """Line-interval color index over lines 1..n_lines of one file."""

    __slots__ = ("n_lines", "_color", "_left", "_right", "_lo", "_hi")

    def __init__(self, defs: list[tuple[int, LineRange]], n_lines: int):
        if n_lines < 0:
            raise ValueError("n_lines must be non-negative")
        self.n_lines = n_lines
        # Array-backed tree; node 0 is the root. A node carries a color when
        # its whole interval is uniformly owned; -1 means mixed (descend),
        # None-color is encoded as -2 (unowned).
        self._color: list[int] = []
        self._left: list[int] = []
        self._right: list[int] = []
        self._lo: list[int] = []
        self._hi: list[int] = []
        if n_lines > 0:
            self._new_node(1, n_lines)
            # paint outermost first so inner definitions overwrite their parents
            for def_id, rng in sorted(defs, key=lambda e: (-len(e[1]), e[1].start_line)):
                if rng.is_empty:
                    continue
                if rng.start_line < 1 or rng.end_line > n_lines:
                    raise IntervalQueryError(
                        f"definition range {rng.start_line}..{rng.end_line} "
                        f"outside 1..{n_lines}")
                self._assign(0, rng.start_line, rng.end_line, def_id)

    def _new_node(self, lo: int, hi: int) -> int:
        self._color.append(-2)
        self._left.append(-1)
        self._right.append(-1)
        self._lo.append(lo)
        self._hi.append(hi)
        return len(self._color) - 1

    def _push_down(self, node: int) -> None:
        lo, hi = self._lo[node], self._hi[node]
        if self._left[node] == -1:
            mid = (lo + hi) // 2
            self._left[node] = self._new_node(lo, mid)
            self._right[node] = self._new_node(mid + 1, hi)
        if self._color[node] != -1:
            self._color[self._left[node]] = self._color[node]
            self._color[self._right[node]] = self._color[node]
            self._color[node] = -1

    def _assign(self, node: int, lo: int, hi: int, color: int) -> None:
        nlo, nhi = self._lo[node], self._hi[node]
        if hi < nlo or nhi < lo:
            return
        if lo <= nlo and nhi <= hi:
            self._color[node] = color
            return
        self._push_down(node)
        self._assign(self._left[node], lo, hi, color)
        self._assign(self._right[node], lo, hi, color)

    def query(self, start_line: int, end_line: int) -> list[ColoredSegment]:
        """Owned segments intersecting [start_line, end_line], in order."""
        if start_line < 1 or end_line > self.n_lines or start_line > end_line:
            raise IntervalQueryError(
                f"query {start_line}..{end_line} outside 1..{self.n_lines}")
        pieces: list[tuple[int, int, int]] = []
        self._collect(0, start_line, end_line, pieces)
        merged: list[ColoredSegment] = []
        for lo, hi, color in pieces:
            if color == -2:
                continue
            if merged and merged[-1].def_id == color \
                    and merged[-1].range.end_line + 1 == lo:
                prev = merged.pop()
                merged.append(ColoredSegment(
                    color, LineRange(prev.range.start_line, hi)))
            else:
                merged.append(ColoredSegment(color, LineRange(lo, hi)))
        return merged

    def _collect(self, node: int, lo: int, hi: int,
                 out: list[tuple[int, int, int]]) -> None:
        nlo, nhi = self._lo[node], self._hi[node]
        if hi < nlo or nhi < lo:
            return
        if self._color[node] != -1:
            out.append((max(nlo, lo), min(nhi, hi), self._color[node]))
            return
        self._collect(self._left[node], lo, hi, out)
        self._collect(self._right[node], lo, hi, out)

    def owner_of_line(self, line: int) -> int | None:
        """Innermost definition containing the line, if any."""
        segs = self.query(line, line)
        return segs[0].def_id if segs else None
