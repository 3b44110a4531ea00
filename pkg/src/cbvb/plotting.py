"""Figures written to files by the ``--figure`` options of the command line.

Only the Agg backend is used, so nothing needs a display.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .resource import height  # noqa: E402
from .syntax import tree_nodes  # noqa: E402

__all__ = ["layout_tree", "plot_bt", "plot_commutation"]


def layout_tree(node: tuple) -> list[tuple[str, float, int, int | None]]:
    """Place nodes for drawing: ``(label, x, depth, parent index)``.

    Leaves get consecutive x positions and an inner node sits above the
    middle of its children.
    """
    out: list[tuple[str, float, int, int | None]] = []
    next_leaf = [0]

    def go(n: tuple, depth: int, parent: int | None) -> float:
        label, kids = n
        me = len(out)
        out.append((label, 0.0, depth, parent))
        if not kids:
            x = float(next_leaf[0])
            next_leaf[0] += 1
        else:
            xs = [go(k, depth + 1, me) for k in kids]
            x = (xs[0] + xs[-1]) / 2
        out[me] = (label, x, depth, parent)
        return x

    go(node, 0, None)
    return out


def plot_bt(bt, path: str | Path, title: str = "") -> Path:
    """Draw the Böhm tree prefix in ``bt``; the empty tree is drawn as ∅."""
    root = tree_nodes(bt)
    nodes = layout_tree(root) if root is not None else [("∅", 0.0, 0, None)]
    width = max(x for _, x, _, _ in nodes) + 1
    depth = max(d for _, _, d, _ in nodes) + 1
    fig, ax = plt.subplots(figsize=(max(2.5, 0.9 * width + 1), max(2.0, 0.9 * depth + 0.8)))
    for label, x, d, parent in nodes:
        if parent is not None:
            _, px, pd, _ = nodes[parent]
            ax.plot([px, x], [-pd, -d], color="0.4", lw=1, zorder=1)
    for label, x, d, _ in nodes:
        color = "#f3d9a4" if label in ("?", "⊥") else "white"
        ax.text(x, -d, label, ha="center", va="center", fontsize=11, zorder=2,
                bbox=dict(boxstyle="round,pad=0.3", fc=color, ec="0.3"))
    ax.set_xlim(-0.7, width - 0.3)
    ax.set_ylim(-depth + 0.4, 0.6)
    ax.axis("off")
    ax.set_title(title or f"Böhm tree ({bt.status.value.lower()})", fontsize=10)
    return _save(fig, path)


def _height_counts(es: Iterable) -> Counter:
    return Counter(height(e) for e in es)


def plot_commutation(report, path: str | Path, title: str = "") -> Path:
    """Bar chart of both sides of a commutation check, by element height."""
    left = _height_counts(report.left.elems)
    right = _height_counts(report.right.elems)
    hs = sorted(set(left) | set(right)) or [0]
    fig, ax = plt.subplots(figsize=(max(3.5, 0.6 * len(hs) + 2), 3))
    w = 0.38
    ax.bar([h - w / 2 for h in hs], [left[h] for h in hs], w, label="normal form of the expansion")
    ax.bar([h + w / 2 for h in hs], [right[h] for h in hs], w, label="expansion of the tree")
    ax.set_xticks(hs)
    ax.set_xlabel("height")
    ax.set_ylabel("elements")
    ax.legend(fontsize=8)
    f = report.filter
    ax.set_title(title or f"{report.verdict}, filter ({f.max_bag},{f.max_height})", fontsize=10)
    return _save(fig, path)


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
