"""Semantic utility matrix U = Z S Z.

Signal weights z are conservative per-PT effect sizes (posterior lower
bound of IC for k > 1, incidence proportion for k = 1); the utility matrix
weights pairwise semantic similarity by both endpoints' signal strength.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .disprop import SignalStats
from .embed import SimilarityMatrix
from .errors import InvalidArgument
from .ingest import IncidenceTable


@dataclass(frozen=True)
class UtilityGraph:
    """Symmetric nonnegative utility matrix over an ordered PT list."""

    terms: list[str]
    weights: np.ndarray  # (m,) z_i >= 0
    matrix: np.ndarray   # (m, m) U = Z S Z

    @property
    def m(self) -> int:
        return len(self.terms)


def signal_weights(
    table: IncidenceTable,
    stats: SignalStats | None = None,
    two_sided: bool = False,
) -> np.ndarray:
    """Per-PT signal weight z.

    k > 1 uses the posterior IC lower bound clamped at zero (the signed
    k=2 bound can be negative; control-elevated pairs must not produce
    positive utility).  `two_sided` swaps in the lower quantile of |IC|
    draws.  k = 1 uses the incidence proportion c/N.
    """
    if table.k == 1:
        return table.counts[:, 0] / float(table.n_subjects[0])
    if stats is None:
        raise InvalidArgument("signal weights for k > 1 require SignalStats")
    if two_sided:
        return np.maximum(stats.abs_ic_lower, 0.0)
    return np.maximum(stats.ic_lower, 0.0)


def utility_matrix(z: np.ndarray, s: SimilarityMatrix) -> UtilityGraph:
    """U(i,j) = z_i * z_j * S(i,j); zero rows mark isolated PTs."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape[0] != len(s.terms):
        raise InvalidArgument(
            f"weight length {z.shape[0]} does not match similarity "
            f"dimension {len(s.terms)}"
        )
    if np.any(z < 0.0):
        raise InvalidArgument("signal weights must be nonnegative")
    u = z[:, np.newaxis] * s.values * z[np.newaxis, :]
    u.flags.writeable = False
    return UtilityGraph(terms=list(s.terms), weights=z, matrix=u)
