"""Matplotlib renderings: evaluation score charts and link-graph drawings."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from scisoftx.evaluation import EvalReport, precision_recall_f1
from scisoftx.graphs import LinkGraph

_PUBLICATION_COLOR = "#c0392b"  # mentions / pages
_CODE_COLOR = "#2e6da4"  # files / packages


def render_eval_figure(report: EvalReport, path) -> Path:
    """Grouped per-document precision/recall/F1 bars with corpus totals."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    docs = report.per_document
    names = [d.document for d in docs]
    scores = [precision_recall_f1(d.tp, d.fp, d.fn) for d in docs]
    fig, ax = plt.subplots(figsize=(max(6.0, 1.1 * len(docs) + 2), 4.0))
    width = 0.27
    xs = range(len(docs))
    for offset, (label, series) in enumerate(
        (
            ("precision", [s[0] for s in scores]),
            ("recall", [s[1] for s in scores]),
            ("F1", [s[2] for s in scores]),
        )
    ):
        ax.bar(
            [x + (offset - 1) * width for x in xs],
            series,
            width=width,
            label=label,
        )
    ax.axhline(report.precision, linestyle="--", linewidth=1.0, color="gray")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("score")
    ax.set_title(
        f"corpus: P={report.precision:.3f} R={report.recall:.3f} F1={report.f1:.3f}"
    )
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_graph_figure(graph: LinkGraph, path) -> Path:
    """Two-column bipartite drawing; publication side red, code side blue."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    left = [n for n in graph.nodes if n.kind in ("mention", "page")]
    right = [n for n in graph.nodes if n.kind in ("file", "package")]
    positions: dict[str, tuple[float, float]] = {}
    for column, nodes, x in (("left", left, 0.0), ("right", right, 1.0)):
        count = max(1, len(nodes))
        for i, node in enumerate(nodes):
            y = 1.0 - (i + 0.5) / count
            positions[node.node_id] = (x, y)
    height = max(3.0, 0.32 * max(len(left), len(right), 1) + 1)
    fig, ax = plt.subplots(figsize=(9.0, height))
    max_weight = max((e.weight for e in graph.edges), default=1)
    for edge in graph.edges:
        (x0, y0), (x1, y1) = positions[edge.source], positions[edge.target]
        ax.plot(
            [x0, x1],
            [y0, y1],
            color="#888888",
            linewidth=0.6 + 2.4 * edge.weight / max_weight,
            zorder=1,
            alpha=0.8,
        )
    for node in graph.nodes:
        x, y = positions[node.node_id]
        color = _PUBLICATION_COLOR if node.kind in ("mention", "page") else _CODE_COLOR
        ax.scatter([x], [y], s=160, color=color, zorder=2)
        ha = "right" if x == 0.0 else "left"
        label = node.label if len(node.label) <= 40 else node.label[:37] + "..."
        ax.text(x + (-0.03 if x == 0.0 else 0.03), y, label, fontsize=7,
                ha=ha, va="center", zorder=3)
    ax.set_xlim(-0.8, 1.8)
    ax.set_ylim(-0.05, 1.05)
    ax.axis("off")
    ax.set_title(f"{graph.level}-level link graph")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
