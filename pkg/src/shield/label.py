"""Cluster labeling: LLM-backed with a deterministic offline fallback.

The LLM path posts each cluster's PTs to a chat-completions-style
endpoint and trims the reply to a single short concept name.  The
fallback names a cluster after its medoid PT (the member with maximal
mean similarity to the others) so offline runs stay deterministic.
"""

from __future__ import annotations

import json
import os
import time
import urllib.error
import urllib.parse
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .embed import SimilarityMatrix
from .errors import ConfigError, InvalidArgument

MAX_LABEL_CHARS = 60
API_KEY_ENV = "SHIELD_LLM_API_KEY"
MAX_IN_FLIGHT = 4
_RETRIES = 2
_BACKOFF_BASE = 1.0  # seconds; doubles per retry
_TIMEOUT = 30.0

PROMPT_TEMPLATE = (
    "The following MedDRA Preferred Terms form one cluster of related "
    "adverse events: {pts}. Reply with only a single unifying medical "
    "concept name (max 6 words)."
)


@dataclass(frozen=True)
class ClusterLabel:
    cluster_id: int
    label: str
    source: str  # "llm" or "fallback"
    member_pts: list[str]

    def __post_init__(self):
        if not self.label or "\n" in self.label or len(self.label) > MAX_LABEL_CHARS:
            raise InvalidArgument("label must be one nonempty line of <= 60 chars")


@dataclass(frozen=True)
class LLMConfig:
    endpoint: str
    model: str
    api_key: str | None = None

    def __post_init__(self):
        parts = urllib.parse.urlparse(self.endpoint)
        if parts.scheme not in ("http", "https") or not parts.netloc:
            raise ConfigError(f"malformed LLM endpoint: {self.endpoint!r}")
        if not self.model:
            raise ConfigError("LLM model name must be nonempty")


def _clean_label(text: str) -> str:
    line = text.strip().splitlines()[0].strip() if text.strip() else ""
    return line[:MAX_LABEL_CHARS]


def label_cluster_fallback(
    cluster_id: int, member_pts: list[str], s: SimilarityMatrix
) -> ClusterLabel:
    """Medoid-based label: "≈ " + the member closest to all the others."""
    if not member_pts:
        raise InvalidArgument("cannot label an empty cluster")
    idx = [s.index_of(p) for p in member_pts]
    if len(member_pts) == 1:
        medoid = member_pts[0]
    else:
        sub = s.values[np.ix_(idx, idx)]
        n = len(idx)
        means = (sub.sum(axis=1) - np.diag(sub)) / (n - 1)
        best = means.max()
        candidates = [member_pts[i] for i in range(n) if means[i] == best]
        medoid = min(candidates)
    label = _clean_label("≈ " + medoid)
    return ClusterLabel(
        cluster_id=cluster_id, label=label, source="fallback",
        member_pts=list(member_pts),
    )


def _post_completion(config: LLMConfig, prompt: str) -> str:
    payload = json.dumps(
        {"model": config.model, "messages": [{"role": "user", "content": prompt}]}
    ).encode("utf-8")
    headers = {"Content-Type": "application/json"}
    key = config.api_key or os.environ.get(API_KEY_ENV)
    if key:
        headers["Authorization"] = f"Bearer {key}"
    req = urllib.request.Request(
        config.endpoint, data=payload, headers=headers, method="POST"
    )
    with urllib.request.urlopen(req, timeout=_TIMEOUT) as resp:
        body = json.loads(resp.read().decode("utf-8"))
    return body["choices"][0]["message"]["content"]


def label_cluster_llm(
    cluster_id: int,
    member_pts: list[str],
    config: LLMConfig,
    s: SimilarityMatrix,
) -> ClusterLabel:
    """One labeled cluster via the LLM, falling back after failed retries."""
    if not member_pts:
        raise InvalidArgument("cannot label an empty cluster")
    prompt = PROMPT_TEMPLATE.format(pts=", ".join(member_pts))
    for attempt in range(_RETRIES + 1):
        try:
            text = _clean_label(_post_completion(config, prompt))
            if text:
                return ClusterLabel(
                    cluster_id=cluster_id, label=text, source="llm",
                    member_pts=list(member_pts),
                )
        except (urllib.error.URLError, OSError, KeyError, IndexError, ValueError):
            pass
        if attempt < _RETRIES:
            time.sleep(_BACKOFF_BASE * (2.0 ** attempt))
    return label_cluster_fallback(cluster_id, member_pts, s)


def label_clusters(
    clusters: dict[int, list[str]],
    s: SimilarityMatrix,
    config: LLMConfig | None = None,
) -> list[ClusterLabel]:
    """Label every flat cluster; LLM calls run with a small in-flight cap."""
    ids = sorted(clusters)
    if config is None:
        return [label_cluster_fallback(c, clusters[c], s) for c in ids]
    with ThreadPoolExecutor(max_workers=MAX_IN_FLIGHT) as pool:
        futures = [
            pool.submit(label_cluster_llm, c, clusters[c], config, s) for c in ids
        ]
        return [f.result() for f in futures]
