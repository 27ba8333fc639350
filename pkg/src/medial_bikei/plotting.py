"""Figures for tables and classification reports (matplotlib, file output only)."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .algebra import BikeiTable  # noqa: E402


def plot_table(t: BikeiTable, path, title: str | None = None) -> Path:
    """Heatmaps of both operation blocks, side by side."""
    path = Path(path)
    fig, axes = plt.subplots(1, 2, figsize=(8, 4.2), constrained_layout=True)
    ticks = np.arange(t.n)
    labels = [str(k + 1) for k in ticks] if t.n <= 20 else None
    for ax, block, name in zip(axes, (t.under, t.over), ("x _ y", "x ^ y")):
        im = ax.imshow(block, cmap="viridis", vmin=1, vmax=max(t.n, 2), interpolation="nearest")
        ax.set_title(name)
        ax.set_xlabel("y")
        ax.set_ylabel("x")
        if labels:
            ax.set_xticks(ticks, labels)
            ax.set_yticks(ticks, labels)
            if t.n <= 10:
                for (i, j), v in np.ndenumerate(block):
                    ax.text(j, i, str(v), ha="center", va="center", color="w", fontsize=8)
    fig.colorbar(im, ax=axes, shrink=0.8, label="element")
    fig.suptitle(title or f"bikei of order {t.n}")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_classification(
    names: Sequence[str],
    cardinalities: Sequence[int | None],
    class_ids: Sequence[int | None],
    path,
    bound: int | None = None,
) -> Path:
    """One bar per corpus entry, colored by isomorphism class.

    Entries without a class (bound exceeded or unreadable) are drawn grey at
    the bound, or left empty when no bound is given.
    """
    path = Path(path)
    k = len(names)
    fig, ax = plt.subplots(figsize=(7, 0.35 * k + 1.5), constrained_layout=True)
    cmap = plt.get_cmap("tab10")
    ypos = np.arange(k)
    for y, card, cid in zip(ypos, cardinalities, class_ids):
        if cid is None:
            if bound is not None:
                ax.barh(y, bound, color="0.85", hatch="//", edgecolor="0.5")
                ax.text(bound, y, " bound", va="center", fontsize=8)
            continue
        ax.barh(y, card, color=cmap((cid - 1) % 10))
        ax.text(card, y, f" {card}  [class {cid}]", va="center", fontsize=8)
    ax.set_yticks(ypos, list(names))
    ax.invert_yaxis()
    ax.set_xscale("log")
    known = [c for c in cardinalities if c]
    if bound and None in class_ids:
        known.append(bound)
    ax.set_xlim(1, 4 * max(known, default=10))
    ax.set_xlabel("cardinality")
    ax.grid(True, axis="x", which="both", linestyle="--", alpha=0.4)
    ax.set_title("fundamental medial bikei by entry")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
