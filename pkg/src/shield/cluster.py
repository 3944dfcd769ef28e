"""Spectral embedding and Ward clustering of the utility graph.

The normalized Laplacian L = I - D^{-1/2} U D^{-1/2} is eigendecomposed,
the near-zero eigenvalue count sets the embedding width, rows of the
eigenvector block are normalized to the unit sphere, and Ward linkage
with a largest-gap cut yields the flat cluster assignment.  Isolated PTs
(zero utility row) bypass clustering entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraph, InvalidArgument
from .utility import UtilityGraph

ISOLATION_EPS = 1e-12
ZERO_TOL_REL = 1e-8
ROW_NORM_EPS = 1e-12
DEFAULT_MIN_CLUSTER_SIZE = 2


@dataclass(frozen=True)
class Merge:
    """One agglomeration step; leaf ids 0..m'-1, internal ids m'..2m'-2."""

    left_id: int
    right_id: int
    distance: float
    size: int


@dataclass(frozen=True)
class ClusterTree:
    """Ward dendrogram over the clustered PTs plus the flat gap-cut."""

    merges: list[Merge]
    flat_assignment: list[int | None]  # full-length m, None = unclustered
    num_spectral: int
    eigenvalues: np.ndarray
    kept: tuple[int, ...]      # original indices of clustered PTs
    isolated: tuple[int, ...]  # original indices excluded for D_ii ~ 0

    @property
    def num_clusters(self) -> int:
        labels = {c for c in self.flat_assignment if c is not None}
        return len(labels)


def normalized_laplacian(
    u: UtilityGraph,
) -> tuple[np.ndarray, tuple[int, ...], tuple[int, ...]]:
    """L = I - D^{-1/2} U D^{-1/2} over the non-isolated PTs.

    D_ii sums the full row including the diagonal.  Returns the exactly
    symmetric Laplacian plus the kept and excluded original indices.
    """
    d = u.matrix.sum(axis=1)
    kept = np.flatnonzero(d > ISOLATION_EPS)
    isolated = np.flatnonzero(d <= ISOLATION_EPS)
    if kept.size == 0:
        raise EmptyGraph("every PT is isolated; no graph to cluster")
    sub = u.matrix[np.ix_(kept, kept)]
    inv_sqrt = 1.0 / np.sqrt(d[kept])
    lap = np.eye(kept.size) - inv_sqrt[:, np.newaxis] * sub * inv_sqrt[np.newaxis, :]
    lap = (lap + lap.T) / 2.0
    return lap, tuple(int(i) for i in kept), tuple(int(i) for i in isolated)


def eigendecompose(lap: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a symmetric L.

    Sign convention: each vector's largest-magnitude component (first such
    index on ties) is made positive, so results are reproducible across
    LAPACK builds.
    """
    lap = np.asarray(lap, dtype=np.float64)
    if lap.ndim != 2 or lap.shape[0] != lap.shape[1]:
        raise InvalidArgument("Laplacian must be square")
    if not np.allclose(lap, lap.T, atol=1e-9, rtol=0.0):
        raise InvalidArgument("Laplacian must be symmetric within 1e-9")
    values, vectors = np.linalg.eigh(lap)
    for r in range(vectors.shape[1]):
        pivot = int(np.argmax(np.abs(vectors[:, r])))
        if vectors[pivot, r] < 0.0:
            vectors[:, r] = -vectors[:, r]
    return values, vectors


def estimate_num_clusters(eigenvalues: np.ndarray, zero_tol: float | None = None) -> int:
    """Initial cluster-count estimate q from the near-zero eigenvalues.

    Counts eigenvalues below zero_tol (default 1e-8 * largest, floored at
    1e-12); when none qualify, falls back to the largest relative gap in
    the first min(m', 20) eigenvalues.  Clamped to [1, m'-1].
    """
    w = np.asarray(eigenvalues, dtype=np.float64)
    mp = w.shape[0]
    if mp <= 1:
        return 1
    if zero_tol is None:
        zero_tol = max(ZERO_TOL_REL * float(w[-1]), 1e-12)
    q = int(np.count_nonzero(w < zero_tol))
    if q == 0:
        head = w[: min(mp, 20)]
        gaps = (head[1:] - head[:-1]) / head[:-1]
        q = int(np.argmax(gaps)) + 1
    return min(max(q, 1), mp - 1)


def spectral_embedding(
    vectors: np.ndarray, q: int
) -> tuple[np.ndarray, tuple[int, ...]]:
    """Rows of the q leading eigenvectors, normalized to the unit sphere.

    Rows whose pre-normalization norm is below 1e-12 are replaced with the
    first standard basis direction; their indices are returned alongside.
    """
    if q < 1:
        raise InvalidArgument(f"embedding width must be >= 1, got {q}")
    coords = np.array(vectors[:, :q], dtype=np.float64)
    norms = np.linalg.norm(coords, axis=1)
    degenerate = np.flatnonzero(norms < ROW_NORM_EPS)
    for r in degenerate:
        coords[r] = 0.0
        coords[r, 0] = 1.0
        norms[r] = 1.0
    coords /= norms[:, np.newaxis]
    return coords, tuple(int(i) for i in degenerate)


def ward_linkage(points: np.ndarray) -> list[Merge]:
    """Agglomerative Ward merges via the Lance-Williams recurrence.

    Distances are maintained as squared Ward distances (2x the increase
    in within-cluster ESS); the reported distance is their square root.
    Tie-break: the lexicographically smallest (left_id, right_id) pair.
    """
    points = np.asarray(points, dtype=np.float64)
    m = points.shape[0]
    if m < 2:
        return []
    total = 2 * m - 1
    # dd[i, j] holds squared Ward distance for active ids i < j; inf elsewhere
    dd = np.full((total, total), np.inf)
    diff = points[:, np.newaxis, :] - points[np.newaxis, :, :]
    sq = np.einsum("ijk,ijk->ij", diff, diff)
    iu = np.triu_indices(m, 1)
    dd[iu] = sq[iu]
    sizes = np.zeros(total, dtype=np.int64)
    sizes[:m] = 1
    active = np.zeros(total, dtype=bool)
    active[:m] = True
    merges: list[Merge] = []
    for step in range(m - 1):
        flat = int(np.argmin(dd))
        i, j = divmod(flat, total)
        d2 = dd[i, j]
        new = m + step
        ni, nj = sizes[i], sizes[j]
        merges.append(Merge(int(i), int(j), float(np.sqrt(d2)), int(ni + nj)))
        others = np.flatnonzero(active)
        others = others[(others != i) & (others != j)]
        for c in others:
            dic = dd[min(i, c), max(i, c)]
            djc = dd[min(j, c), max(j, c)]
            nc = sizes[c]
            dd[c, new] = (
                (ni + nc) * dic + (nj + nc) * djc - nc * d2
            ) / (ni + nj + nc)
        active[i] = active[j] = False
        active[new] = True
        sizes[new] = ni + nj
        dd[i, :] = np.inf
        dd[:, i] = np.inf
        dd[j, :] = np.inf
        dd[:, j] = np.inf
    return merges


def cut_by_gap(
    merges: list[Merge],
    m: int,
    min_cluster_size: int = DEFAULT_MIN_CLUSTER_SIZE,
) -> list[int | None]:
    """Flat assignment from the largest gap in successive merge distances.

    The cut keeps every merge up to and including the one before the
    largest distance jump (ties resolved toward the later merge, giving
    fewer clusters); a flat spectrum collapses to a single cluster.
    Clusters smaller than min_cluster_size map to None.
    """
    if m < 1:
        return []
    assignment: list[int | None]
    if not merges:
        keep_upto = -1
    else:
        dist = np.array([mg.distance for mg in merges])
        diffs = dist[1:] - dist[:-1]
        if diffs.size == 0 or np.all(diffs <= 0.0):
            keep_upto = len(merges) - 1
        else:
            best = diffs.max()
            t = int(np.flatnonzero(diffs == best)[-1])
            keep_upto = t
    parent = list(range(m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    members: dict[int, list[int]] = {i: [i] for i in range(m)}
    node_root = {i: i for i in range(m)}
    for step in range(keep_upto + 1):
        mg = merges[step]
        ra, rb = node_root[mg.left_id], node_root[mg.right_id]
        ra, rb = find(ra), find(rb)
        parent[rb] = ra
        members[ra].extend(members.pop(rb))
        node_root[m + step] = ra
    assignment = [None] * m
    label = 0
    seen: dict[int, int] = {}
    for leaf in range(m):
        root = find(leaf)
        if root not in seen:
            group = members[root]
            seen[root] = -1
            if len(group) >= min_cluster_size:
                seen[root] = label
                label += 1
        cluster = seen[root]
        assignment[leaf] = None if cluster < 0 else cluster
    return assignment


def cluster_graph(
    u: UtilityGraph,
    min_cluster_size: int = DEFAULT_MIN_CLUSTER_SIZE,
) -> ClusterTree:
    """Full spectral + Ward pass over a utility graph."""
    lap, kept, isolated = normalized_laplacian(u)
    values, vectors = eigendecompose(lap)
    q = estimate_num_clusters(values)
    coords, _ = spectral_embedding(vectors, q)
    merges = ward_linkage(coords)
    sub_assignment = cut_by_gap(merges, len(kept), min_cluster_size)
    flat: list[int | None] = [None] * u.m
    for pos, orig in enumerate(kept):
        flat[orig] = sub_assignment[pos]
    values.flags.writeable = False
    return ClusterTree(
        merges=merges,
        flat_assignment=flat,
        num_spectral=q,
        eigenvalues=values,
        kept=kept,
        isolated=isolated,
    )
