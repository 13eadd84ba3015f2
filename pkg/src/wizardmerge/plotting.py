"""Render priority groups as figures.

One PNG per group: rank buckets are drawn as rows (resolve-first on top),
MDG edges as arrows from dependent items down toward what they depend on.
Layout is deterministic, so figures are reproducible for identical inputs.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import FancyArrowPatch

from .priority import Mdg, MdgNode, PriorityGroup

_STATUS_COLORS = {"Conflict": "#d64541", "Violated": "#e8a33d"}


def _node_label(node: MdgNode) -> str:
    lead = node.node_a or node.node_b
    prefix = "C" if node.status == "Conflict" else "V"
    return f"{prefix}: {lead.display_name}\n{lead.file}"


def render_group_figures(groups: list[PriorityGroup], mdg: Mdg,
                         out_dir: str | Path, dpi: int = 150) -> list[Path]:
    """Write group_<id>.png files; returns the created paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    index_of = {id(node): i for i, node in enumerate(mdg.nodes)}
    written: list[Path] = []

    for group in groups:
        positions: dict[int, tuple[float, float]] = {}
        n_ranks = len(group.buckets)
        width = max(len(b) for b in group.buckets) if group.buckets else 1
        fig, ax = plt.subplots(
            figsize=(max(4.0, 2.6 * width), max(3.0, 1.6 * n_ranks)))
        for rank, bucket in enumerate(group.buckets):
            y = float(n_ranks - 1 - rank)
            offset = (width - len(bucket)) / 2.0
            for slot, node in enumerate(bucket):
                x = offset + slot
                positions[index_of[id(node)]] = (x, y)
                ax.add_patch(plt.Rectangle(
                    (x - 0.42, y - 0.22), 0.84, 0.44,
                    facecolor=_STATUS_COLORS[node.status],
                    edgecolor="black", linewidth=0.8, zorder=2))
                ax.text(x, y, _node_label(node), ha="center", va="center",
                        fontsize=7, zorder=3)
            ax.text(-0.9, y, f"rank {rank}", ha="right", va="center",
                    fontsize=8, color="#555555")
        for a, b in mdg.edges:
            if a in positions and b in positions:
                xa, ya = positions[a]
                xb, yb = positions[b]
                ax.add_patch(FancyArrowPatch(
                    (xa, ya - 0.24), (xb, yb + 0.24),
                    arrowstyle="-|>", mutation_scale=11,
                    color="#444444", linewidth=0.9, zorder=1,
                    connectionstyle="arc3,rad=0.08"))
        ax.set_xlim(-1.6, width - 0.2 + 0.8)
        ax.set_ylim(-0.8, n_ranks - 0.2)
        ax.set_title(f"Group {group.group_id} resolution order")
        ax.axis("off")
        path = out / f"group_{group.group_id}.png"
        fig.savefig(path, dpi=dpi, metadata={"Software": None})
        plt.close(fig)
        written.append(path)
    return written
