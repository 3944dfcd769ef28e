"""Command-line orchestration of the full analysis pipeline.

Single `analyze` subcommand; the pipeline mode follows the arm count of
the parsed table (k>=2 full statistics, k=2 adds signs, k=1 incidence
only).  Exit codes: 0 success, 1 usage/configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import sys
import warnings
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .cluster import cluster_graph
from .disprop import compute_signal_stats
from .embed import (
    cosine_similarity_submatrix,
    load_embeddings,
    threshold_similarity,
)
from .errors import DataError, EmptyTable, MissingEmbedding, UsageError
from .ingest import IncidenceTable, parse_incidence_csv, filter_zero_rows
from .label import LLMConfig, label_clusters, label_cluster_fallback
from .report import (
    ReportBundle,
    build_summary,
    export_graph_json,
    render_dendrogram_svg,
    render_html_report,
    summary_csv,
    summary_json,
)
from .utility import signal_weights, utility_matrix

_DEFAULTS = {
    "sim_min": 0.5,
    "gamma": 0.95,
    "draws": 20000,
    "seed": 42,
    "labeler": "offline",
    "summary": "median",
    "min_cluster_size": 2,
    "skip_missing": False,
    "no_viewer": False,
    "two_sided": False,
    "label_hierarchy": False,
}


@dataclass(frozen=True)
class RunConfig:
    input: str
    embeddings: str
    out: str
    arms: list[str] | None = None
    sim_min: float = 0.5
    gamma: float = 0.95
    draws: int = 20000
    seed: int = 42
    labeler: str = "offline"
    llm_endpoint: str | None = None
    llm_model: str | None = None
    skip_missing: bool = False
    no_viewer: bool = False
    two_sided: bool = False
    label_hierarchy: bool = False
    summary: str = "median"
    min_cluster_size: int = 2

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise UsageError(f"--gamma must lie in (0, 1), got {self.gamma}")
        if not 0.0 <= self.sim_min < 1.0:
            raise UsageError(f"--sim-min must lie in [0, 1), got {self.sim_min}")
        if self.draws < 1000:
            raise UsageError(f"--draws must be >= 1000, got {self.draws}")
        if not -(2 ** 63) <= self.seed < 2 ** 64:
            raise UsageError("--seed must fit in 64 bits")
        if self.labeler not in ("offline", "llm"):
            raise UsageError(f"--labeler must be offline or llm, got {self.labeler}")
        if self.summary not in ("mean", "median"):
            raise UsageError(f"--summary must be mean or median, got {self.summary}")
        if self.min_cluster_size < 1:
            raise UsageError("--min-cluster-size must be >= 1")
        if self.labeler == "llm":
            if not self.llm_endpoint or not self.llm_model:
                raise UsageError("--labeler llm requires --llm-endpoint and --llm-model")
            LLMConfig(endpoint=self.llm_endpoint, model=self.llm_model)


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the CLI contract reserves
    # 2 for data errors, so route through UsageError instead
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="shield", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    an = sub.add_parser("analyze", help="run the full analysis pipeline")
    an.add_argument("--input", help="incidence CSV path")
    an.add_argument("--embeddings", help="embedding file (CSV or binary)")
    an.add_argument("--out", help="output directory")
    an.add_argument("--arms", help="comma-separated arm columns, in order")
    an.add_argument("--sim-min", type=float, dest="sim_min",
                    help="similarity threshold tau (default 0.5)")
    an.add_argument("--gamma", type=float, help="credible level (default 0.95)")
    an.add_argument("--draws", type=int, help="posterior draws (default 20000)")
    an.add_argument("--seed", type=int, help="RNG seed (default 42)")
    an.add_argument("--labeler", choices=("offline", "llm"),
                    help="cluster labeling mode (default offline)")
    an.add_argument("--llm-endpoint", dest="llm_endpoint",
                    help="chat-completions endpoint URL")
    an.add_argument("--llm-model", dest="llm_model", help="LLM model name")
    an.add_argument("--skip-missing", dest="skip_missing", action="store_true",
                    default=None, help="drop PTs without embeddings")
    an.add_argument("--no-viewer", dest="no_viewer", action="store_true",
                    default=None, help="emit report.html without scripts")
    an.add_argument("--two-sided", dest="two_sided", action="store_true",
                    default=None, help="weight by |IC| lower bounds (k=2)")
    an.add_argument("--label-hierarchy", dest="label_hierarchy",
                    action="store_true", default=None,
                    help="also label internal dendrogram nodes")
    an.add_argument("--summary", choices=("mean", "median"),
                    help="posterior point summary (default median)")
    an.add_argument("--min-cluster-size", type=int, dest="min_cluster_size",
                    help="clusters below this size become None (default 2)")
    an.add_argument("--config", help="key=value config file; flags override")
    return parser


def _parse_config_file(path: str) -> dict:
    values: dict = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"config line {ln} is not key=value: {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        values[key] = value.strip()
    return values


_BOOL_KEYS = ("skip_missing", "no_viewer", "two_sided", "label_hierarchy")
_INT_KEYS = ("draws", "seed", "min_cluster_size")
_FLOAT_KEYS = ("sim_min", "gamma")


def _coerce(key: str, raw: str):
    try:
        if key in _BOOL_KEYS:
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
    except ValueError:
        raise UsageError(f"bad config value for {key}: {raw!r}") from None
    return raw


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge config-file values under CLI flags and validate."""
    merged: dict = {}
    if args.config:
        file_values = _parse_config_file(args.config)
        known = {f.name for f in fields(RunConfig)}
        for key, raw in file_values.items():
            if key not in known:
                raise UsageError(f"unknown config key: {key}")
            merged[key] = _coerce(key, raw)
    for f in fields(RunConfig):
        cli = getattr(args, f.name, None)
        if cli is not None:
            merged[f.name] = cli
    for key, value in _DEFAULTS.items():
        merged.setdefault(key, value)
    for required in ("input", "embeddings", "out"):
        if not merged.get(required):
            raise UsageError(f"--{required} is required")
    if isinstance(merged.get("arms"), str):
        merged["arms"] = [a.strip() for a in merged["arms"].split(",") if a.strip()]
    return RunConfig(**merged)


def _subset_table(table: IncidenceTable, keep: list[int]) -> IncidenceTable:
    return IncidenceTable(
        pt_names=[table.pt_names[i] for i in keep],
        counts=np.array(table.counts[keep], dtype=np.int64),
        arm_names=list(table.arm_names),
        n_subjects=np.array(table.n_subjects, dtype=np.int64),
    )


def _load_viewer_js() -> str | None:
    try:
        asset = resources.files("shield").joinpath("assets/viewer.js")
        return asset.read_text(encoding="utf-8")
    except (FileNotFoundError, ModuleNotFoundError):
        return None


def _config_dict(config: RunConfig) -> dict:
    return {f.name: getattr(config, f.name) for f in fields(RunConfig)}


def run_analysis(config: RunConfig) -> ReportBundle:
    """Execute the pipeline and write the output directory."""
    try:
        raw = Path(config.input).read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read input {config.input}: {exc}") from None
    table = filter_zero_rows(parse_incidence_csv(raw, arm_spec=config.arms))

    try:
        emb_bytes = Path(config.embeddings).read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read embeddings {config.embeddings}: {exc}") from None
    store = load_embeddings(emb_bytes)

    skipped: list[str] = []
    if config.skip_missing:
        missing = {pt for pt in table.pt_names if pt not in store}
        if missing:
            skipped = [pt for pt in table.pt_names if pt in missing]
            keep = [i for i, pt in enumerate(table.pt_names) if pt not in missing]
            if not keep:
                raise EmptyTable("every PT lacks an embedding")
            warnings.warn(
                f"dropping {len(skipped)} PT(s) without embeddings: "
                + ", ".join(skipped),
                RuntimeWarning,
                stacklevel=2,
            )
            table = _subset_table(table, keep)
    sim = cosine_similarity_submatrix(store, list(table.pt_names))
    sim = threshold_similarity(sim, config.sim_min)

    if table.k >= 2:
        stats = compute_signal_stats(
            table, gamma=config.gamma, draws=config.draws, seed=config.seed
        )
    else:
        stats = None
    z = signal_weights(table, stats, two_sided=config.two_sided)
    graph = utility_matrix(z, sim)
    tree = cluster_graph(graph, min_cluster_size=config.min_cluster_size)

    clusters: dict[int, list[str]] = {}
    for i, cluster in enumerate(tree.flat_assignment):
        if cluster is not None:
            clusters.setdefault(cluster, []).append(table.pt_names[i])
    llm_config = None
    if config.labeler == "llm":
        llm_config = LLMConfig(endpoint=config.llm_endpoint, model=config.llm_model)
    labels = label_clusters(clusters, sim, llm_config)

    hierarchy: list[dict] | None = None
    if config.label_hierarchy:
        hierarchy = _label_hierarchy(table, tree, sim, llm_config)

    meta = {
        "k": table.k,
        "arm_names": list(table.arm_names),
        "gamma": config.gamma,
        "tau": config.sim_min,
        "draws": config.draws,
        "seed": config.seed,
        "version": __version__,
    }
    rows = build_summary(table, stats, tree.flat_assignment, labels, config.summary)
    graph_json = export_graph_json(
        graph, table, stats, tree.flat_assignment, labels, meta, config.summary
    )
    if stats is None:
        values = z
        lower = None
    else:
        values = stats.ic_mean if config.summary == "mean" else stats.ic_median
        lower = stats.ic_lower
    kept_values = np.array([values[i] for i in tree.kept])
    kept_lower = None if lower is None else np.array([lower[i] for i in tree.kept])
    svg = render_dendrogram_svg(tree, list(table.pt_names), kept_values, kept_lower, labels)
    bundle = ReportBundle(
        summary_rows=rows, graph_json=graph_json, dendrogram_svg=svg, meta=meta
    )
    viewer_js = None if config.no_viewer else _load_viewer_js()
    html = render_html_report(bundle, viewer_js, no_viewer=config.no_viewer)

    outdir = Path(config.out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "summary.csv").write_bytes(summary_csv(rows, list(table.arm_names)))
    summary_obj = {"meta": meta, "rows": rows}
    if hierarchy is not None:
        summary_obj["hierarchy"] = hierarchy
    (outdir / "summary.json").write_text(
        json.dumps(summary_obj, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    (outdir / "graph.json").write_text(graph_json, encoding="utf-8")
    (outdir / "dendrogram.svg").write_text(svg, encoding="utf-8")
    (outdir / "report.html").write_text(html, encoding="utf-8")
    config_map = _config_dict(config)
    config_hash = hashlib.sha256(
        json.dumps(config_map, sort_keys=True).encode("utf-8")
    ).hexdigest()
    run_meta = {
        "version": __version__,
        "config": config_map,
        "config_hash": config_hash,
        "skipped_pts": skipped,
        "isolated_pts": [table.pt_names[i] for i in tree.isolated],
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    (outdir / "run_meta.json").write_text(
        json.dumps(run_meta, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return bundle


def _label_hierarchy(
    table: IncidenceTable,
    tree,
    sim,
    llm_config: LLMConfig | None,
) -> list[dict]:
    """Presentation-only labels for internal dendrogram nodes."""
    mp = len(tree.kept)
    subtree: dict[int, list[str]] = {
        i: [table.pt_names[tree.kept[i]]] for i in range(mp)
    }
    out = []
    for t, mg in enumerate(tree.merges):
        members = subtree[mg.left_id] + subtree[mg.right_id]
        subtree[mp + t] = members
        if llm_config is None:
            lb = label_cluster_fallback(mp + t, members, sim)
        else:
            from .label import label_cluster_llm
            lb = label_cluster_llm(mp + t, members, llm_config, sim)
        out.append({"node": mp + t, "label": lb.label, "members": members})
    return out


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = build_config(args)
        run_analysis(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
