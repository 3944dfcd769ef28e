"""Information Component disproportionality statistics.

Per PT this module computes the raw IC (a KL divergence in bits between
observed and expected arm distributions), a G-test p-value against
chi-square with k-1 degrees of freedom, the two-arm directional sign, and
Dirichlet-shrinkage posterior summaries of IC and per-arm relative risk
obtained by Gamma sampling on deterministic per-PT substreams.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InsufficientData, InvalidArgument, NotApplicable
from .ingest import IncidenceTable

EPS = 1e-12
LN2 = math.log(2.0)

ALPHA_MIN = 0.5
ALPHA_MAX = 1000.0
ALPHA_FLOOR = 0.1

_SF_TOL = 1e-16
_SF_MAX_ITER = 500


@dataclass(frozen=True)
class DirichletPrior:
    """Dirichlet hyperparameters alpha_j with concentration alpha0 = sum."""

    alpha: np.ndarray  # (k,) positive
    alpha0: float

    def __post_init__(self):
        alpha = np.ascontiguousarray(self.alpha, dtype=np.float64)
        if alpha.ndim != 1 or alpha.size == 0 or np.any(alpha <= 0.0):
            raise InvalidArgument("prior alpha must be a positive vector")
        total = float(alpha.sum())
        if abs(self.alpha0 - total) > 1e-9 * max(1.0, abs(total)):
            raise InvalidArgument("alpha0 must equal sum(alpha)")
        alpha.flags.writeable = False
        object.__setattr__(self, "alpha", alpha)


@dataclass(frozen=True)
class SignalStats:
    """Per-PT statistics for a k >= 2 incidence table (arrays over PTs)."""

    pt_names: list[str]
    raw_ic: np.ndarray       # (m,) bits
    pmi: np.ndarray          # (m, k) bits
    g_stat: np.ndarray       # (m,)
    p_value: np.ndarray      # (m,)
    sign: np.ndarray | None  # (m,) of +1/-1, k=2 only
    ic_mean: np.ndarray      # (m,)
    ic_median: np.ndarray
    ic_lower: np.ndarray
    ic_upper: np.ndarray
    abs_ic_lower: np.ndarray  # lower quantile of |IC| draws, two-sided mode
    rr_mean: np.ndarray      # (m, k)
    rr_median: np.ndarray
    rr_lower: np.ndarray
    rr_upper: np.ndarray
    expected: np.ndarray     # (m, k)
    prior: DirichletPrior
    gamma: float
    draws: int
    seed: int

    @property
    def m(self) -> int:
        return self.raw_ic.shape[0]

    @property
    def k(self) -> int:
        return self.expected.shape[1]


def expected_counts(table: IncidenceTable) -> np.ndarray:
    """Expected counts under the null: E(i,j) = T_i * N_j / N_tot."""
    totals = table.totals.astype(np.float64)
    return totals[:, np.newaxis] * (table.n_subjects / float(table.n_total))


def raw_ic(table: IncidenceTable) -> tuple[np.ndarray, np.ndarray]:
    """Raw IC per PT plus the PMI matrix.

    IC_i = sum_j phat_{j|i} * PMI_{i,j} with PMI in bits; cells with
    c_{i,j} = 0 contribute exactly zero (not 0 * log(eps/E)).
    """
    counts = table.counts.astype(np.float64)
    expected = expected_counts(table)
    pmi = np.log2((counts + EPS) / (expected + EPS))
    cond = counts / (table.totals[:, np.newaxis] + EPS)
    terms = np.where(counts > 0, cond * pmi, 0.0)
    return terms.sum(axis=1), pmi


def g_test(table: IncidenceTable, ic: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Likelihood-ratio statistic G = 2 T IC ln2 and its chi-square p-value."""
    if table.k < 2:
        raise NotApplicable("G-test requires at least two arms")
    g = 2.0 * table.totals * np.asarray(ic, dtype=np.float64) * LN2
    g = np.maximum(g, 0.0)
    df = table.k - 1
    p = np.array([chi_square_sf(float(x), df) for x in g])
    return g, p


def _gamma_p_series(a: float, x: float) -> float:
    # lower regularized P(a, x) by series, for x < a + 1
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_SF_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _SF_TOL:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_cf(a: float, x: float) -> float:
    # upper regularized Q(a, x) by Lentz continued fraction, for x >= a + 1
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _SF_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _SF_TOL:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def chi_square_sf(x: float, df: int) -> float:
    """Chi-square survival function: Q(df/2, x/2), abs error <= 1e-12."""
    if df < 1:
        raise InvalidArgument(f"df must be a positive integer, got {df}")
    if x < 0.0:
        raise InvalidArgument(f"x must be nonnegative, got {x}")
    a = 0.5 * df
    half = 0.5 * x
    if half == 0.0:
        return 1.0
    if half < a + 1.0:
        return 1.0 - _gamma_p_series(a, half)
    return _gamma_q_cf(a, half)


def sign_two_arm(table: IncidenceTable, expected: np.ndarray) -> np.ndarray:
    """Directional sign for k=2: +1 iff c_{i,2} > E_{i,2}, ties -1."""
    if table.k != 2:
        raise NotApplicable("directional sign is defined only for two arms")
    return np.where(table.counts[:, 1] > expected[:, 1], 1, -1).astype(np.int64)


def estimate_hyperprior(table: IncidenceTable) -> DirichletPrior:
    """Method-of-moments Dirichlet hyperprior over arm proportions.

    Per arm, alpha0 candidate = mu(1-mu)/var - 1 from the empirical
    p_{i,j} = c_{i,j}/(T_i+eps) across PTs; alpha0 is the median candidate
    clamped to [ALPHA_MIN, ALPHA_MAX] and alpha_j = alpha0 * mu_j floored
    at ALPHA_FLOOR.
    """
    if table.m < 2:
        raise InsufficientData("hyperprior estimation needs at least two PTs")
    phat = table.counts / (table.totals[:, np.newaxis] + EPS)
    mu = phat.mean(axis=0)
    var = phat.var(axis=0, ddof=1)
    if np.all(var <= 0.0):
        warnings.warn(
            "all per-arm variances are zero; falling back to alpha0 = "
            f"{ALPHA_MAX}",
            RuntimeWarning,
            stacklevel=2,
        )
        alpha0 = ALPHA_MAX
    else:
        with np.errstate(divide="ignore"):
            candidates = np.where(var > 0.0, mu * (1.0 - mu) / var - 1.0, np.inf)
        alpha0 = float(np.median(candidates))
        alpha0 = min(max(alpha0, ALPHA_MIN), ALPHA_MAX)
    alpha = np.maximum(alpha0 * mu, ALPHA_FLOOR)
    return DirichletPrior(alpha=alpha, alpha0=float(alpha.sum()))


def posterior_samples(
    counts: np.ndarray,
    prior: DirichletPrior,
    expected: np.ndarray,
    draws: int,
    seed: int,
    pt_index: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Gamma-sampled posterior IC and RR draws for one PT.

    Deterministic in (seed, pt_index) via a dedicated RNG substream.  For
    k=2 each IC draw is signed by whether the draw's arm-2 RR exceeds 1.
    """
    counts = np.asarray(counts, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    shapes = counts + prior.alpha
    if np.any(shapes <= 0.0):
        raise InvalidArgument("posterior shapes must be positive")
    mu = expected / expected.sum()
    state = _kernels.stream_state(seed, pt_index)
    ic, rr = _kernels.posterior_ic_rr(shapes, mu, int(draws), state)
    if counts.shape[0] == 2:
        ic = np.where(rr[:, 1] > 1.0, ic, -ic)
    return ic, rr


def posterior_summaries(samples: np.ndarray, gamma: float) -> tuple[float, float, float, float]:
    """Mean, median, and equal-tailed credible bounds at level gamma."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise InvalidArgument("cannot summarize empty samples")
    if not 0.0 < gamma < 1.0:
        raise InvalidArgument(f"gamma must be in (0, 1), got {gamma}")
    lo = (1.0 - gamma) / 2.0
    mean = float(samples.mean())
    median, lower, upper = np.quantile(samples, [0.5, lo, 1.0 - lo])
    return mean, float(median), float(lower), float(upper)


def compute_signal_stats(
    table: IncidenceTable,
    gamma: float = 0.95,
    draws: int = 20000,
    seed: int = 0,
) -> SignalStats:
    """Full per-PT statistics pass for a k >= 2 table."""
    if table.k < 2:
        raise NotApplicable("signal statistics require at least two arms")
    expected = expected_counts(table)
    ic, pmi = raw_ic(table)
    g, p = g_test(table, ic)
    sign = sign_two_arm(table, expected) if table.k == 2 else None
    prior = estimate_hyperprior(table)

    m, k = table.m, table.k
    ic_mean = np.empty(m)
    ic_median = np.empty(m)
    ic_lower = np.empty(m)
    ic_upper = np.empty(m)
    abs_ic_lower = np.empty(m)
    rr_mean = np.empty((m, k))
    rr_median = np.empty((m, k))
    rr_lower = np.empty((m, k))
    rr_upper = np.empty((m, k))
    lo_q = (1.0 - gamma) / 2.0
    for i in range(m):
        ic_s, rr_s = posterior_samples(
            table.counts[i], prior, expected[i], draws, seed, i
        )
        ic_mean[i], ic_median[i], ic_lower[i], ic_upper[i] = posterior_summaries(
            ic_s, gamma
        )
        abs_ic_lower[i] = float(np.quantile(np.abs(ic_s), lo_q))
        rr_mean[i] = rr_s.mean(axis=0)
        rr_median[i], rr_lower[i], rr_upper[i] = np.quantile(
            rr_s, [0.5, lo_q, 1.0 - lo_q], axis=0
        )
    for arr in (
        ic_mean, ic_median, ic_lower, ic_upper, abs_ic_lower,
        rr_mean, rr_median, rr_lower, rr_upper, expected, ic, pmi, g, p,
    ):
        arr.flags.writeable = False
    return SignalStats(
        pt_names=list(table.pt_names),
        raw_ic=ic,
        pmi=pmi,
        g_stat=g,
        p_value=p,
        sign=sign,
        ic_mean=ic_mean,
        ic_median=ic_median,
        ic_lower=ic_lower,
        ic_upper=ic_upper,
        abs_ic_lower=abs_ic_lower,
        rr_mean=rr_mean,
        rr_median=rr_median,
        rr_lower=rr_lower,
        rr_upper=rr_upper,
        expected=expected,
        prior=prior,
        gamma=gamma,
        draws=draws,
        seed=seed,
    )
