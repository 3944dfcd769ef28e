"""Report rendering: summary table, graph JSON, dendrogram SVG, HTML.

All serializations are canonical (sorted keys, shortest round-trip float
repr, LF newlines) so identical analyses produce byte-identical files.
Number formatting mirrors the conventional safety-table layout: signals
at 2 decimals, p-values at 4, incidence as "c/N".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .cluster import ClusterTree
from .disprop import SignalStats
from .errors import ConfigError, InternalError
from .ingest import IncidenceTable
from .label import ClusterLabel
from .utility import UtilityGraph

UNCLUSTERED = "None"

_PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#aec7e8", "#ff9896",
]
_NEUTRAL = "#888888"


@dataclass(frozen=True)
class ReportBundle:
    """Everything the writers need, in input PT order."""

    summary_rows: list[dict]
    graph_json: str
    dendrogram_svg: str
    meta: dict


def fold_change(ic: float) -> float:
    """Adjusted fold-change 2^ic."""
    return float(2.0 ** ic)


def format_signal(x: float) -> str:
    return f"{x:.2f}"


def format_p(p: float) -> str:
    return f"{p:.4f}"


def _cluster_labels_by_id(labels: list[ClusterLabel]) -> dict[int, str]:
    return {lb.cluster_id: lb.label for lb in labels}


def build_summary(
    table: IncidenceTable,
    stats: SignalStats | None,
    assignment: list[int | None],
    labels: list[ClusterLabel],
    summary_stat: str = "median",
) -> list[dict]:
    """Formatted per-PT rows, input order preserved.

    k >= 2 rows carry adjusted/CI/raw/p columns (plus sign for k = 2);
    the single-arm branch reports the incidence proportion instead.
    """
    if stats is not None and stats.pt_names != list(table.pt_names):
        raise InternalError("stats PT set does not match the table")
    if len(assignment) != table.m:
        raise InternalError("assignment length does not match the table")
    names = _cluster_labels_by_id(labels)
    rows = []
    for i, pt in enumerate(table.pt_names):
        cluster = assignment[i]
        row = {
            "pt": pt,
            "cluster": UNCLUSTERED if cluster is None else names[cluster],
            "incidence": [
                f"{int(c)}/{int(n)}"
                for c, n in zip(table.counts[i], table.n_subjects)
            ],
        }
        if stats is None:
            row["proportion"] = f"{table.counts[i, 0] / table.n_subjects[0]:.4f}"
        else:
            ic_adj = stats.ic_mean[i] if summary_stat == "mean" else stats.ic_median[i]
            row["adjusted"] = format_signal(fold_change(ic_adj))
            row["ci_lower"] = format_signal(fold_change(stats.ic_lower[i]))
            row["ci_upper"] = format_signal(fold_change(stats.ic_upper[i]))
            row["raw_ratio"] = format_signal(fold_change(stats.raw_ic[i]))
            row["p_value"] = format_p(stats.p_value[i])
            if stats.sign is not None:
                row["sign"] = int(stats.sign[i])
        rows.append(row)
    return rows


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def export_graph_json(
    u: UtilityGraph,
    table: IncidenceTable,
    stats: SignalStats | None,
    assignment: list[int | None],
    labels: list[ClusterLabel],
    meta: dict,
    summary_stat: str = "median",
) -> str:
    """Canonical JSON of the utility graph for the interactive viewer.

    Nodes are dense 0..m-1 in input order; zero-weight edges are omitted.
    Single-arm exports carry null ic_lower/fold_change (no posterior).
    """
    names = _cluster_labels_by_id(labels)
    nodes = []
    for i, pt in enumerate(u.terms):
        cluster = assignment[i]
        if stats is None:
            ic_lower = fold = ci_lo = ci_hi = None
        else:
            ic_adj = stats.ic_mean[i] if summary_stat == "mean" else stats.ic_median[i]
            ic_lower = float(stats.ic_lower[i])
            fold = fold_change(ic_adj)
            ci_lo = fold_change(stats.ic_lower[i])
            ci_hi = fold_change(stats.ic_upper[i])
        nodes.append({
            "id": i,
            "pt": pt,
            "cluster": cluster,
            "label": UNCLUSTERED if cluster is None else names[cluster],
            "node_weight": float(u.matrix[i, i]),
            "ic_lower": ic_lower,
            "fold_change": fold,
            "ci_lower": ci_lo,
            "ci_upper": ci_hi,
            "incidence": [
                {"c": int(c), "n": int(n)}
                for c, n in zip(table.counts[i], table.n_subjects)
            ],
        })
    edges = []
    for i in range(u.m):
        for j in range(i + 1, u.m):
            w = float(u.matrix[i, j])
            if w > 0.0:
                edges.append({"source": i, "target": j, "weight": w})
    return _canonical_json({"meta": meta, "nodes": nodes, "edges": edges})


def _leaf_order(tree: ClusterTree) -> list[int]:
    mp = len(tree.kept)
    if not tree.merges:
        return list(range(mp))
    order: list[int] = []
    stack = [2 * mp - 2]
    while stack:
        node = stack.pop()
        if node < mp:
            order.append(node)
        else:
            mg = tree.merges[node - mp]
            stack.append(mg.right_id)
            stack.append(mg.left_id)
    return order


def render_dendrogram_svg(
    tree: ClusterTree,
    pt_names: list[str],
    values: np.ndarray,
    lower: np.ndarray | None,
    labels: list[ClusterLabel],
) -> str:
    """Standalone SVG: dendrogram, leaf labels, and signed effect bars.

    `values` and `lower` are per-kept-leaf effect sizes (signed ic for
    k >= 2, incidence proportion with lower=None for k = 1); branch color
    marks the flat cluster when a subtree is pure, gray otherwise.
    """
    mp = len(tree.kept)
    order = _leaf_order(tree)
    row_h, top, bottom = 16, 34, 12
    dend_w, gap = 220, 8
    label_w = max(120, 6 * max((len(pt_names[k]) for k in tree.kept), default=10)) + 10
    bar_w = 160
    width = 10 + dend_w + gap + label_w + gap + bar_w + 10
    height = top + mp * row_h + bottom

    leaf_y = {leaf: top + order.index(leaf) * row_h + row_h / 2 for leaf in range(mp)}
    d_max = max((mg.distance for mg in tree.merges), default=1.0)
    if d_max <= 0.0:
        d_max = 1.0
    x_leaf = 10 + dend_w

    def node_color(node: int) -> str:
        leaves = []
        stack = [node]
        while stack:
            n = stack.pop()
            if n < mp:
                leaves.append(n)
            else:
                mg = tree.merges[n - mp]
                stack.extend((mg.left_id, mg.right_id))
        clusters = {tree.flat_assignment[tree.kept[n]] for n in leaves}
        if len(clusters) == 1:
            c = clusters.pop()
            if c is not None:
                return _PALETTE[c % len(_PALETTE)]
        return _NEUTRAL

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        '<style>text{font-family:Helvetica,Arial,sans-serif;font-size:10px;}'
        '.t{font-size:11px;font-weight:bold;}</style>',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        '<text class="t" x="10" y="14">Cluster dendrogram</text>',
        f'<text class="t" x="{10 + dend_w + gap + label_w + gap}" y="14">'
        "Signal (bits, bar) with lower bound (tick)</text>",
    ]

    # dendrogram segments, drawn bottom-up so parents know child positions
    pos: dict[int, tuple[float, float]] = {
        leaf: (x_leaf, leaf_y[leaf]) for leaf in range(mp)
    }
    for t, mg in enumerate(tree.merges):
        xl, yl = pos[mg.left_id]
        xr, yr = pos[mg.right_id]
        xp = x_leaf - (mg.distance / d_max) * (dend_w - 10)
        color = node_color(mp + t)
        cl = node_color(mg.left_id)
        cr = node_color(mg.right_id)
        parts.append(
            f'<line x1="{xp:.2f}" y1="{yl:.2f}" x2="{xl:.2f}" y2="{yl:.2f}" '
            f'stroke="{cl}" stroke-width="1.2"/>'
        )
        parts.append(
            f'<line x1="{xp:.2f}" y1="{yr:.2f}" x2="{xr:.2f}" y2="{yr:.2f}" '
            f'stroke="{cr}" stroke-width="1.2"/>'
        )
        parts.append(
            f'<line x1="{xp:.2f}" y1="{min(yl, yr):.2f}" x2="{xp:.2f}" '
            f'y2="{max(yl, yr):.2f}" stroke="{color}" stroke-width="1.2"/>'
        )
        pos[mp + t] = (xp, (yl + yr) / 2.0)

    # leaf labels
    x_text = x_leaf + gap
    for leaf in range(mp):
        orig = tree.kept[leaf]
        cluster = tree.flat_assignment[orig]
        color = _NEUTRAL if cluster is None else _PALETTE[cluster % len(_PALETTE)]
        parts.append(
            f'<text x="{x_text}" y="{leaf_y[leaf] + 3.5:.2f}" '
            f'fill="{color}">{escape(pt_names[orig])}</text>'
        )

    # signed effect bars with lower-bound ticks
    x_bar0 = x_text + label_w + gap
    span = 1.0
    for leaf in range(mp):
        span = max(span, abs(float(values[leaf])))
        if lower is not None:
            span = max(span, abs(float(lower[leaf])))
    axis = x_bar0 + bar_w / 2.0
    scale = (bar_w / 2.0 - 4.0) / span
    parts.append(
        f'<line x1="{axis:.2f}" y1="{top - 4}" x2="{axis:.2f}" '
        f'y2="{height - bottom + 2}" stroke="#cccccc" stroke-width="1"/>'
    )
    for leaf in range(mp):
        orig = tree.kept[leaf]
        cluster = tree.flat_assignment[orig]
        color = _NEUTRAL if cluster is None else _PALETTE[cluster % len(_PALETTE)]
        v = float(values[leaf]) * scale
        y = leaf_y[leaf]
        x0, x1 = (axis + v, axis) if v < 0 else (axis, axis + v)
        parts.append(
            f'<rect x="{x0:.2f}" y="{y - 4.5:.2f}" width="{max(x1 - x0, 0.2):.2f}" '
            f'height="9" fill="{color}" fill-opacity="0.75"/>'
        )
        if lower is not None:
            xt = axis + float(lower[leaf]) * scale
            parts.append(
                f'<line x1="{xt:.2f}" y1="{y - 6:.2f}" x2="{xt:.2f}" '
                f'y2="{y + 6:.2f}" stroke="#222222" stroke-width="1.4"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _summary_table_html(rows: list[dict], arm_names: list[str]) -> str:
    single = rows and "proportion" in rows[0]
    heads = ["PT", "Cluster", *arm_names]
    if single:
        heads.append("Incidence proportion")
    else:
        heads += ["Adjusted", "CI", "Raw ratio", "p-value"]
        if rows and "sign" in rows[0]:
            heads.append("Sign")
    out = ["<table>", "<thead><tr>"]
    out += [f"<th>{escape(h)}</th>" for h in heads]
    out.append("</tr></thead>")
    out.append("<tbody>")
    for row in rows:
        cells = [row["pt"], row["cluster"], *row["incidence"]]
        if single:
            cells.append(row["proportion"])
        else:
            cells += [
                row["adjusted"],
                f"({row['ci_lower']}, {row['ci_upper']})",
                row["raw_ratio"],
                row["p_value"],
            ]
            if "sign" in row:
                cells.append(f"{row['sign']:+d}")
        out.append(
            "<tr>" + "".join(f"<td>{escape(str(c))}</td>" for c in cells) + "</tr>"
        )
    out.append("</tbody></table>")
    return "\n".join(out)


def render_html_report(
    bundle: ReportBundle,
    viewer_js: str | None,
    no_viewer: bool = False,
) -> str:
    """Self-contained HTML: summary table, dendrogram, optional viewer.

    The graph JSON and viewer script are inlined ("</" escaped so the
    payload cannot close its own script element); --no-viewer emits a
    script-free document.
    """
    if not no_viewer and viewer_js is None:
        raise ConfigError(
            "viewer assets are unavailable; rerun with --no-viewer or "
            "reinstall with the bundled viewer"
        )
    meta = bundle.meta
    head = (
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
        "<title>AE signal report</title>\n"
        "<style>body{font-family:Helvetica,Arial,sans-serif;margin:20px;}"
        "table{border-collapse:collapse;font-size:12px;}"
        "th,td{border:1px solid #ccc;padding:3px 7px;text-align:left;}"
        "th{background:#f0f0f0;}h2{margin-top:28px;}"
        "#graph{margin-top:10px;}</style>\n</head>\n<body>\n"
    )
    title = (
        f"<h1>Adverse event signal report</h1>\n"
        f"<p>k={meta['k']} arms: {escape(', '.join(meta['arm_names']))} "
        f"| gamma={meta['gamma']} | tau={meta['tau']} "
        f"| draws={meta['draws']} | seed={meta['seed']} "
        f"| version {escape(str(meta['version']))}</p>\n"
    )
    table_html = "<h2>Summary table</h2>\n" + _summary_table_html(
        bundle.summary_rows, list(meta["arm_names"])
    )
    dendro = "\n<h2>Dendrogram</h2>\n" + bundle.dendrogram_svg
    if no_viewer:
        viewer = ""
    else:
        graph_inline = bundle.graph_json.replace("</", "<\\/")
        viewer_inline = viewer_js.replace("</", "<\\/")
        viewer = (
            "\n<h2>Network graph</h2>\n<div id=\"graph\"></div>\n"
            f'<script id="graph-data" type="application/json">{graph_inline}'
            "</script>\n"
            f"<script>{viewer_inline}</script>\n"
        )
    return head + title + table_html + dendro + viewer + "</body>\n</html>\n"


def summary_csv(rows: list[dict], arm_names: list[str]) -> bytes:
    """summary.csv bytes with LF newlines, Table-1-like column layout."""
    import csv
    import io

    single = rows and "proportion" in rows[0]
    cols = ["pt", "cluster", *arm_names]
    if single:
        cols.append("proportion")
    else:
        cols += ["adjusted", "ci_lower", "ci_upper", "raw_ratio", "p_value"]
        if rows and "sign" in rows[0]:
            cols.append("sign")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        cells = [row["pt"], row["cluster"], *row["incidence"]]
        if single:
            cells.append(row["proportion"])
        else:
            cells += [
                row["adjusted"], row["ci_lower"], row["ci_upper"],
                row["raw_ratio"], row["p_value"],
            ]
            if "sign" in row:
                cells.append(row["sign"])
        writer.writerow(cells)
    return buf.getvalue().encode("utf-8")


def summary_json(rows: list[dict], meta: dict) -> str:
    return _canonical_json({"meta": meta, "rows": rows})
