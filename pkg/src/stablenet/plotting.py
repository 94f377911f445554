"""Matplotlib drawings of networks, MUL-trees and class-size summaries."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

from .canonical import EquivPartition, canon_codes
from .core import MulTree, XNetwork

__all__ = ["layout", "draw", "save_network_png", "save_class_sizes_png"]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def layout(obj: Union[XNetwork, MulTree]) -> Dict[int, Tuple[float, float]]:
    """Layered positions: y is minus the longest distance from the root.

    Leaves are spread evenly in depth-first order (children in canonical
    order); an interior vertex sits above the mean of its children.
    """
    g = obj.graph
    codes = canon_codes(obj)
    depth: Dict[int, int] = {}
    for v in g.topological_order():
        ps = g.parents(v)
        depth[v] = max((depth[p] + 1 for p in ps), default=0)
    order: List[int] = []
    seen = set()
    stack = [g.root]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        if g.is_leaf(v):
            order.append(v)
        stack.extend(sorted(set(g.children(v)), key=lambda c: codes[c], reverse=True))
    x: Dict[int, float] = {leaf: float(i) for i, leaf in enumerate(order)}
    for v in reversed(g.topological_order()):
        if v not in x:
            kids = g.children(v)
            x[v] = sum(x[c] for c in kids) / len(kids)
    return {v: (x[v], -float(depth[v])) for v in g.vertices}


def draw(obj: Union[XNetwork, MulTree], ax, title: str = "", highlight: Iterable[Tuple[int, int]] = ()) -> None:
    """Draw onto a matplotlib axis; ``highlight`` arcs are dashed red."""
    g = obj.graph
    pos = layout(obj)
    hi = {tuple(a) for a in highlight}
    counts: Dict[Tuple[int, int], int] = {}
    for a in g.arcs:
        key = (a.tail, a.head)
        k = counts.get(key, 0)
        counts[key] = k + 1
        (x0, y0), (x1, y1) = pos[a.tail], pos[a.head]
        style = dict(arrowstyle="-|>", color="black", lw=1.0, shrinkA=4, shrinkB=4)
        if key in hi:
            style.update(color="tab:red", linestyle="--")
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(connectionstyle=f"arc3,rad={0.25 * k}", **style))
    for v, (vx, vy) in pos.items():
        label = obj.label_of(v)
        if label is not None:
            ax.text(vx, vy - 0.15, label, ha="center", va="top", fontsize=10)
            ax.plot(vx, vy, "o", color="black", ms=3)
        elif g.indegree(v) >= 2:
            ax.plot(vx, vy, "o", mfc="white", mec="black", ms=7)
        else:
            ax.plot(vx, vy, "o", color="black", ms=6)
    ax.set_title(title)
    ax.set_axis_off()
    ax.margins(0.1)


def save_network_png(obj: Union[XNetwork, MulTree], path: Union[str, Path], title: str = "",
                     highlight: Iterable[Tuple[int, int]] = ()) -> Path:
    plt = _pyplot()
    width = max(4.0, 0.6 * len(obj.graph.leaves))
    fig, ax = plt.subplots(figsize=(width, 4.0))
    draw(obj, ax, title, highlight)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return Path(path)


def save_class_sizes_png(partition: EquivPartition, path: Union[str, Path], title: str = "") -> Path:
    """Bar chart of class sizes in V(M)/~, one bar per class."""
    plt = _pyplot()
    sizes = [len(c) for c in partition.classes]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.35 * len(sizes)), 3.0))
    ax.bar(range(len(sizes)), sizes, color="tab:blue")
    ax.set_xlabel("class")
    ax.set_ylabel("size")
    ax.set_title(title or "class sizes")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return Path(path)
