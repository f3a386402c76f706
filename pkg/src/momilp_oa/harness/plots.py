"""Figures written next to the text reports."""
from __future__ import annotations

from pathlib import Path

import matplotlib as mpl

mpl.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
    "axes.grid": True,
    "grid.alpha": 0.3,
}


def size(scale=1.0, aspect=None):
    width = 6.4 * scale
    if aspect is None:
        aspect = (np.sqrt(5.0) - 1.0) / 2.0
    return width, width * aspect


def save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_upper_image(result, path, points=None, title=None) -> Path:
    """Draw the (approximate) upper image of a biobjective run.

    ``points`` optionally overlays the enumerated feasible points.
    """
    verts = sorted(tuple(float(v) for v in y) for y in result.extreme_points)
    if not verts or len(verts[0]) != 2:
        raise ValueError("upper-image plots need a biobjective result")
    with mpl.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=size(0.8, aspect=0.9))
        xs = [v[0] for v in verts]
        ys = [v[1] for v in verts]
        span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
        top = max(ys) + 0.3 * span
        right = max(xs) + 0.3 * span
        outline = [(xs[0], top)] + verts + [(right, ys[-1])]
        poly = outline + [(right, top)]
        ax.fill(*zip(*poly), color="tab:blue", alpha=0.25, lw=0, label="upper image")
        ax.plot(*zip(*outline), color="tab:blue")
        if points is not None:
            pts = np.asarray([[float(a), float(b)] for a, b in points])
            ax.scatter(pts[:, 0], pts[:, 1], s=8, color="tab:red", label="feasible points")
        ax.scatter(xs, ys, s=30, facecolor="none", edgecolor="k", label="extreme points")
        ax.set_xlabel("$y_1$")
        ax.set_ylabel("$y_2$")
        ax.set_title(title or f"{len(verts)} extreme points, {len(result.facets)} facets")
        ax.legend(loc="upper right")
        return save(fig, path)


def plot_vertices_3d(result, path, title=None) -> Path:
    pts = np.asarray([[float(v) for v in y] for y in result.extreme_points])
    with mpl.rc_context(STYLE):
        fig = plt.figure(figsize=size(0.8, aspect=0.9))
        ax = fig.add_subplot(projection="3d")
        ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=10, color="tab:blue")
        ax.set_xlabel("$y_1$")
        ax.set_ylabel("$y_2$")
        ax.set_zlabel("$y_3$")
        ax.set_title(title or f"{len(pts)} vertices, {len(result.facets)} facets")
        return save(fig, path)


def plot_result(result, path, points=None) -> Path:
    p = len(result.extreme_points[0])
    if p == 2:
        return plot_upper_image(result, path, points)
    if p == 3:
        return plot_vertices_3d(result, path)
    raise ValueError(f"no figure for p={p}")


def plot_bench(rows, path, limits) -> Path:
    """Average facet count per instance group, one bar per oracle and limit."""
    groups = sorted({r["group"] for r in rows}, key=_group_order)
    oracles = sorted({r["oracle"] for r in rows})
    series = [(o, t) for o in oracles for t in limits]
    with mpl.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=size(1.0))
        width = 0.8 / max(len(series), 1)
        x = np.arange(len(groups))
        for k, (o, t) in enumerate(series):
            vals = []
            for g in groups:
                hit = [r for r in rows if r["group"] == g and r["oracle"] == o and r["limit"] == t]
                vals.append(hit[0]["avg_facets"] if hit else 0.0)
            ax.bar(x + k * width, vals, width, label=f"{o} {t:g}s")
        ax.set_xticks(x + width * (len(series) - 1) / 2)
        ax.set_xticklabels(groups, rotation=30, ha="right")
        ax.set_ylabel("avg #facets")
        ax.legend(ncol=2)
        return save(fig, path)


def _group_order(g: str):
    parts = g.split("-")
    return tuple(int(s) if s.isdigit() else s for s in parts)
