"""Matplotlib rendering of the class graph, for the report path."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import FancyArrowPatch

from .quantised import LabeledDigraph


def render_digraph(graph: LabeledDigraph, path: str, title: str = "") -> None:
    """Draw the labeled digraph on a circular layout and save it.

    Parallel edges get increasing curvature; loops are drawn as small arcs
    above the vertex.
    """
    n = len(graph.node_labels)
    radius = 1.0
    positions = [
        (
            radius * math.cos(math.pi / 2 - 2 * math.pi * k / max(n, 1)),
            radius * math.sin(math.pi / 2 - 2 * math.pi * k / max(n, 1)),
        )
        for k in range(n)
    ]

    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title)

    seen_pairs: dict[tuple[int, int], int] = {}
    for source, target, letter in graph.edges:
        count = seen_pairs.get((source, target), 0)
        seen_pairs[(source, target)] = count + 1
        x0, y0 = positions[source]
        if source == target:
            angle = math.atan2(y0, x0)
            lx = x0 + 0.28 * math.cos(angle) + 0.05 * count
            ly = y0 + 0.28 * math.sin(angle) + 0.05 * count
            loop = FancyArrowPatch(
                (x0 + 0.06, y0 + 0.12),
                (x0 - 0.06, y0 + 0.12),
                connectionstyle=f"arc3,rad={1.8 + 0.4 * count}",
                arrowstyle="-|>",
                mutation_scale=12,
                color="tab:blue",
                shrinkA=8,
                shrinkB=8,
            )
            ax.add_patch(loop)
            ax.text(lx, ly + 0.12, str(letter), fontsize=10, ha="center")
            continue
        x1, y1 = positions[target]
        rad = 0.12 + 0.18 * count
        arrow = FancyArrowPatch(
            (x0, y0),
            (x1, y1),
            connectionstyle=f"arc3,rad={rad}",
            arrowstyle="-|>",
            mutation_scale=12,
            color="tab:blue",
            shrinkA=14,
            shrinkB=14,
        )
        ax.add_patch(arrow)
        mx, my = (x0 + x1) / 2, (y0 + y1) / 2
        # Offset the label to the arc side.
        dx, dy = x1 - x0, y1 - y0
        norm = math.hypot(dx, dy) or 1.0
        off = 0.14 + 0.5 * rad
        ax.text(
            mx - off * dy / norm,
            my + off * dx / norm,
            str(letter),
            fontsize=10,
            ha="center",
        )

    for idx, ((x, y), label) in enumerate(zip(positions, graph.node_labels)):
        ax.scatter([x], [y], s=900, facecolor="white", edgecolor="black", zorder=3)
        ax.text(x, y, label, ha="center", va="center", zorder=4, fontsize=11)

    margin = 1.45
    ax.set_xlim(-margin, margin)
    ax.set_ylim(-margin, margin)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
