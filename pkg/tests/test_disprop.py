"""Information Component statistics, G-test, hyperprior, posterior."""

from __future__ import annotations

import math
import statistics
from pathlib import Path

import numpy as np
import pytest

from shield.disprop import (
    ALPHA_FLOOR,
    ALPHA_MAX,
    ALPHA_MIN,
    DirichletPrior,
    chi_square_sf,
    compute_signal_stats,
    estimate_hyperprior,
    expected_counts,
    g_test,
    posterior_samples,
    posterior_summaries,
    raw_ic,
    sign_two_arm,
)
from shield.errors import InsufficientData, InvalidArgument, NotApplicable
from shield.ingest import IncidenceTable, parse_incidence_csv

FIXTURE = Path(__file__).parent / "data" / "trial_k4.csv"

# chi-square survival references Q(df/2, x/2), 50-digit arbitrary-precision
# upper regularized incomplete gamma, rounded to double
CHI2_REFS = [
    (1, 0.0, 1.0),
    (1, 0.5, 0.47950012218695346),
    (1, 3.841, 0.050013683763956699),
    (1, 25.0, 5.7330314375838782e-07),
    (2, 1.0, 0.60653065971263342),
    (2, 9.21, 0.010001702004705478),
    (3, 0.1, 0.99183742373187648),
    (3, 8.515, 0.036485073987104219),
    (3, 30.0, 1.3800570312932547e-06),
    (4, 2.0, 0.73575888234288464),
    (4, 13.2767, 0.010000017972571747),
    (5, 50.0, 1.3857973367009593e-09),
    (6, 6.0, 0.42319008112684352),
    (6, 100.0, 2.5093035522010570e-19),
    (7, 3.5, 0.83522548261034214),
    (8, 20.09, 0.010000861559524630),
    (9, 9.0, 0.43727418891386706),
    (10, 1.0, 0.99982788437004416),
    (10, 29.588, 0.0010001119410634819),
    (10, 100.0, 5.4497019829205293e-17),
]


def _table(counts, n, pts=None, arms=None) -> IncidenceTable:
    counts = np.asarray(counts)
    m, k = counts.shape
    return IncidenceTable(
        pt_names=pts or [f"PT{i}" for i in range(m)],
        counts=counts,
        arm_names=arms or [f"A{j}" for j in range(k)],
        n_subjects=np.asarray(n),
    )


def _fixture_table() -> IncidenceTable:
    with open(FIXTURE, "rb") as fh:
        return parse_incidence_csv(fh)


def test_expected_counts_ketonuria_row():
    table = _table([[0, 0, 3, 0], [41, 12, 45, 9]], [63, 62, 60, 63])
    e = expected_counts(table)
    np.testing.assert_allclose(e[0], [0.76210, 0.75000, 0.72581, 0.76210], atol=5e-6)


def test_expected_counts_row_sums_and_degenerate_cases():
    table = _table([[0, 0, 3, 0], [41, 12, 45, 9], [5, 5, 2, 6]], [63, 62, 60, 63])
    e = expected_counts(table)
    np.testing.assert_allclose(e.sum(axis=1), table.totals, rtol=1e-9)
    one_arm = _table([[7]], [50])
    np.testing.assert_allclose(expected_counts(one_arm), [[7.0]], rtol=0)
    equal = _table([[8, 8]], [40, 40])
    np.testing.assert_allclose(expected_counts(equal), [[8.0, 8.0]], rtol=1e-12)


def test_raw_ic_ketonuria_closed_form():
    table = _table([[0, 0, 3, 0]], [63, 62, 60, 63])
    ic, pmi = raw_ic(table)
    assert ic[0] == pytest.approx(math.log2(248 / 60), abs=1e-9)
    assert 2.0 ** ic[0] == pytest.approx(4.13, abs=0.005)
    assert pmi.shape == (1, 4)


def test_raw_ic_vomiting_ratio():
    table = _table([[41, 12, 45, 9]], [63, 62, 60, 63])
    ic, _ = raw_ic(table)
    assert 2.0 ** ic[0] == pytest.approx(1.23, abs=0.005)


def test_raw_ic_zero_cells_contribute_exactly_zero():
    table = _table([[0, 10]], [50, 50])
    ic, _ = raw_ic(table)
    # only the nonzero cell contributes: 1.0 * log2(10/5) = 1 bit
    assert ic[0] == pytest.approx(1.0, abs=1e-9)


def test_raw_ic_proportional_counts_is_zero():
    table = _table([[10, 10], [3, 3]], [50, 50])
    ic, _ = raw_ic(table)
    np.testing.assert_allclose(ic, 0.0, atol=1e-9)


def test_raw_ic_nonnegative_randomized():
    rng = np.random.default_rng(404)
    for _ in range(200):
        k = int(rng.integers(2, 5))
        m = int(rng.integers(1, 10))
        n = rng.integers(20, 200, size=k)
        counts = np.stack([rng.integers(0, nj // 2, size=m) for nj in n], axis=1)
        counts[:, 0] += 1  # keep every row nonzero
        ic, _ = raw_ic(_table(counts, n))
        assert np.all(ic >= -1e-9)


def test_g_test_ketonuria_p_value():
    table = _table([[0, 0, 3, 0]], [63, 62, 60, 63])
    ic, _ = raw_ic(table)
    g, p = g_test(table, ic)
    assert g[0] == pytest.approx(2 * 3 * math.log2(248 / 60) * math.log(2), abs=1e-9)
    assert p[0] == pytest.approx(0.0365, abs=5e-4)


def test_g_test_diarrhoea_p_value():
    table = _table([[6, 13, 8, 0]], [63, 62, 60, 63])
    ic, _ = raw_ic(table)
    _, p = g_test(table, ic)
    assert p[0] == pytest.approx(0.0003, abs=5e-5)


def test_g_test_null_ic_gives_p_one():
    table = _table([[10, 10]], [50, 50])
    g, p = g_test(table, np.array([0.0]))
    assert g[0] == 0.0
    assert p[0] == 1.0


def test_g_test_single_arm_not_applicable():
    with pytest.raises(NotApplicable):
        g_test(_table([[5]], [50]), np.array([0.0]))


def test_chi_square_sf_reference_values():
    for df, x, ref in CHI2_REFS:
        got = chi_square_sf(x, df)
        assert abs(got - ref) <= 1e-12, (df, x, got, ref)


def test_chi_square_sf_bounds_and_monotonicity():
    for df in (1, 3, 7):
        values = [chi_square_sf(x, df) for x in np.linspace(0.0, 50.0, 40)]
        assert all(0.0 <= v <= 1.0 for v in values)
        assert all(a >= b for a, b in zip(values, values[1:]))


def test_chi_square_sf_invalid_arguments():
    with pytest.raises(InvalidArgument):
        chi_square_sf(1.0, 0)
    with pytest.raises(InvalidArgument):
        chi_square_sf(-0.5, 2)


def test_sign_two_arm_rule_and_tie():
    table = _table([[0, 6], [6, 0], [5, 5]], [62, 63])
    # third row engineered to make c_2 equal E_2 exactly: N=(62,63) gives
    # no tie, so use a dedicated equal-arm table for the tie case
    sign = sign_two_arm(table, expected_counts(table))
    assert sign[0] == 1
    assert sign[1] == -1
    tie = _table([[5, 5]], [50, 50])
    assert sign_two_arm(tie, expected_counts(tie))[0] == -1


def test_sign_two_arm_requires_two_arms():
    table = _table([[1, 2, 3]], [50, 50, 50])
    with pytest.raises(NotApplicable):
        sign_two_arm(table, expected_counts(table))


def _oracle_prior(counts: list[list[int]]) -> list[float]:
    # independent method-of-moments reimplementation (stdlib statistics)
    eps = 1e-12
    m, k = len(counts), len(counts[0])
    phat = [[counts[i][j] / (sum(counts[i]) + eps) for j in range(k)] for i in range(m)]
    mus, cands = [], []
    for j in range(k):
        col = [phat[i][j] for i in range(m)]
        mu = statistics.fmean(col)
        var = statistics.variance(col)
        mus.append(mu)
        cands.append(mu * (1.0 - mu) / var - 1.0 if var > 0 else math.inf)
    a0 = statistics.median(cands)
    a0 = min(max(a0, 0.5), 1000.0)
    return [max(a0 * mu, 0.1) for mu in mus]


def test_hyperprior_matches_independent_oracle():
    cases = [
        [[3, 7], [7, 3], [5, 5]],
        [[0, 0, 3, 0], [41, 12, 45, 9], [5, 5, 2, 6]],
        [[1, 0], [0, 1], [1, 1], [2, 0]],
    ]
    rng = np.random.default_rng(606)
    for _ in range(30):
        m, k = int(rng.integers(2, 12)), int(rng.integers(2, 5))
        counts = rng.integers(0, 20, size=(m, k))
        counts[:, 0] += 1
        cases.append(counts.tolist())
    for counts in cases:
        counts = np.asarray(counts)
        n = np.full(counts.shape[1], int(counts.sum() + 50))
        try:
            prior = estimate_hyperprior(_table(counts, n))
        except InsufficientData:
            continue
        want = _oracle_prior(counts.tolist())
        np.testing.assert_allclose(prior.alpha, want, rtol=1e-9)
        assert prior.alpha0 == pytest.approx(sum(want), rel=1e-9)


def test_hyperprior_clamps_below():
    # antithetic rows give candidate alpha0 = 0.25/0.5 - 1 = -0.5 -> clamp 0.5
    prior = estimate_hyperprior(_table([[10, 0], [0, 10]], [50, 50]))
    np.testing.assert_allclose(prior.alpha, [0.25, 0.25], rtol=1e-9)
    assert prior.alpha0 == pytest.approx(0.5, rel=1e-9)


def test_hyperprior_zero_variance_warns_and_maxes():
    # identical rows (same totals, so the eps division cancels exactly)
    with pytest.warns(RuntimeWarning):
        prior = estimate_hyperprior(_table([[5, 5], [5, 5]], [50, 50]))
    np.testing.assert_allclose(prior.alpha, [ALPHA_MAX / 2, ALPHA_MAX / 2], rtol=1e-12)


def test_hyperprior_single_row_insufficient():
    with pytest.raises(InsufficientData):
        estimate_hyperprior(_table([[5, 5]], [50, 50]))


def test_hyperprior_alpha_floor_applies():
    # one arm nearly always zero -> tiny mu; floor keeps alpha_j proper
    counts = np.array([[50, 0], [49, 1], [50, 0], [48, 0]])
    prior = estimate_hyperprior(_table(counts, [60, 60]))
    assert np.all(prior.alpha >= ALPHA_FLOOR)
    assert ALPHA_MIN <= prior.alpha0 <= 2 * ALPHA_MAX  # sum after flooring


def test_dirichlet_prior_validation():
    with pytest.raises(InvalidArgument):
        DirichletPrior(alpha=np.array([1.0, -1.0]), alpha0=0.0)
    with pytest.raises(InvalidArgument):
        DirichletPrior(alpha=np.array([1.0, 1.0]), alpha0=3.0)


def test_posterior_samples_deterministic_and_symmetric():
    prior = DirichletPrior(alpha=np.array([1.0, 1.0]), alpha0=2.0)
    counts = np.array([5, 5])
    expected = np.array([5.0, 5.0])
    ic1, rr1 = posterior_samples(counts, prior, expected, 20000, seed=42, pt_index=0)
    ic2, rr2 = posterior_samples(counts, prior, expected, 20000, seed=42, pt_index=0)
    np.testing.assert_array_equal(ic1, ic2)
    np.testing.assert_array_equal(rr1, rr2)
    assert np.all((rr1.mean(axis=0) > 0.95) & (rr1.mean(axis=0) < 1.05))
    # signed two-arm IC: symmetric case straddles zero
    assert abs(float(np.median(ic1))) < 0.05
    assert float(np.quantile(ic1, 0.025)) < 0.0 < float(np.quantile(ic1, 0.975))


def test_posterior_samples_distinct_substreams():
    prior = DirichletPrior(alpha=np.array([1.0, 1.0]), alpha0=2.0)
    counts = np.array([5, 5])
    expected = np.array([5.0, 5.0])
    ic0, _ = posterior_samples(counts, prior, expected, 1000, seed=42, pt_index=0)
    ic1, _ = posterior_samples(counts, prior, expected, 1000, seed=42, pt_index=1)
    assert not np.array_equal(ic0, ic1)


def test_posterior_ic_nonnegative_above_two_arms():
    prior = DirichletPrior(alpha=np.array([0.5, 0.5, 0.5, 0.5]), alpha0=2.0)
    ic, rr = posterior_samples(
        np.array([0, 0, 3, 0]), prior, np.array([0.762, 0.75, 0.726, 0.762]),
        5000, seed=3, pt_index=9,
    )
    assert np.all(ic >= 0.0)
    assert np.all(rr > 0.0)


def test_posterior_summaries_forced_quantiles():
    mean, median, lower, upper = posterior_summaries(np.array([1.0, 2, 3, 4, 5]), 0.8)
    assert (mean, median) == (3.0, 3.0)
    assert lower == pytest.approx(1.4, abs=1e-12)
    assert upper == pytest.approx(4.6, abs=1e-12)


def test_posterior_summaries_constant_and_normal():
    mean, median, lower, upper = posterior_summaries(np.full(100, 2.5), 0.95)
    assert mean == median == lower == upper == 2.5
    rng = np.random.default_rng(314)
    _, _, lower, upper = posterior_summaries(rng.standard_normal(20000), 0.95)
    assert lower == pytest.approx(-1.96, abs=0.05)
    assert upper == pytest.approx(1.96, abs=0.05)


def test_posterior_summaries_rejects_empty_and_bad_gamma():
    with pytest.raises(InvalidArgument):
        posterior_summaries(np.array([]), 0.95)
    with pytest.raises(InvalidArgument):
        posterior_summaries(np.array([1.0]), 1.0)


def test_shrinkage_pulls_posterior_toward_prior_mean():
    # null-centered prior: larger alpha0 shrinks the rare-event IC toward 0
    counts = np.array([0, 0, 3, 0])
    expected = np.array([0.76210, 0.75000, 0.72581, 0.76210])
    mu = expected / expected.sum()
    means = []
    for alpha0 in (1.0, 10.0, 100.0):
        prior = DirichletPrior(alpha=alpha0 * mu, alpha0=alpha0)
        ic, _ = posterior_samples(counts, prior, expected, 8000, seed=5, pt_index=0)
        means.append(abs(float(ic.mean())))
    assert means[0] > means[1] > means[2]


def test_scaling_consistency_median_approaches_raw():
    base = np.array([[0, 0, 3, 0], [41, 12, 45, 9], [5, 5, 2, 6]])
    n = np.array([63, 62, 60, 63])
    gaps = []
    for scale in (1, 100):
        stats = compute_signal_stats(
            _table(base * scale, n * scale), draws=6000, seed=11
        )
        gaps.append(abs(stats.ic_median[0] - stats.raw_ic[0]))
    assert gaps[1] < gaps[0]


def test_compute_signal_stats_fixture_invariants():
    stats = compute_signal_stats(_fixture_table(), draws=2000, seed=7)
    assert stats.m == 72 and stats.k == 4
    assert np.all(stats.ic_lower <= stats.ic_median + 1e-12)
    assert np.all(stats.ic_median <= stats.ic_upper + 1e-12)
    assert np.all(stats.ic_lower >= 0.0)  # k > 2: IC samples are KL values
    assert np.all((stats.p_value >= 0.0) & (stats.p_value <= 1.0))
    assert np.all(stats.g_stat >= 0.0)
    assert stats.sign is None
    assert np.all(stats.rr_lower <= stats.rr_median + 1e-12)
    assert np.all(stats.rr_median <= stats.rr_upper + 1e-12)
    assert np.all(stats.rr_lower > 0.0)
    with pytest.raises(ValueError):
        stats.raw_ic[0] = 0.0


def test_compute_signal_stats_deterministic():
    table = _fixture_table()
    a = compute_signal_stats(table, draws=1500, seed=42)
    b = compute_signal_stats(table, draws=1500, seed=42)
    np.testing.assert_array_equal(a.ic_median, b.ic_median)
    np.testing.assert_array_equal(a.rr_upper, b.rr_upper)
    c = compute_signal_stats(table, draws=1500, seed=43)
    assert not np.array_equal(a.ic_median, c.ic_median)


def test_compute_signal_stats_two_arm_sign():
    table = _table([[0, 6], [6, 0], [10, 10]], [62, 63])
    stats = compute_signal_stats(table, draws=2000, seed=1)
    assert stats.sign is not None
    assert stats.sign[0] == 1 and stats.sign[1] == -1
    # two-arm IC is signed per draw, so intervals may span zero
    assert stats.ic_lower[2] < stats.ic_upper[2]


def test_compute_signal_stats_single_arm_not_applicable():
    with pytest.raises(NotApplicable):
        compute_signal_stats(_table([[5]], [50]))
