import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from collocnet import powerlaw
from collocnet.errors import UndefinedProperty
from collocnet.netbuild import network_from_pairs


def zeta(s, q):
    return float(special.zeta(s, q))


def oracle_ks(samples, xmin, alpha):
    """KS distance by direct summation over every integer in the tail's range."""
    tail = np.sort(np.asarray(samples)[np.asarray(samples) >= xmin])
    norm = zeta(alpha, xmin)
    worst = 0.0
    for x in range(xmin, int(tail[-1]) + 1):
        emp = np.searchsorted(tail, x, side="right") / len(tail)
        model = 1.0 - zeta(alpha, x + 1) / norm
        worst = max(worst, abs(emp - model))
    return worst


def grid_alpha(samples, xmin, step=1e-4):
    tail = np.asarray(samples)[np.asarray(samples) >= xmin]
    log_sum = np.log(tail).sum()
    grid = np.arange(1.0 + step, 6.0, step)
    ll = -len(tail) * np.log(special.zeta(grid, xmin)) - grid * log_sum
    return grid[np.argmax(ll)]


# ------------------------------------------------------------------ zeta


@given(st.floats(1.01, 20), st.floats(0.5, 5000))
def test_hurwitz_zeta_matches_scipy(s, q):
    assert powerlaw.hurwitz_zeta(s, q) == pytest.approx(zeta(s, q), rel=1e-9)


def test_hurwitz_zeta_vectorised():
    s = np.array([1.5, 2.0, 3.5])
    got = powerlaw.hurwitz_zeta(s, 2.0)
    assert np.allclose(got, special.zeta(s, 2.0), rtol=1e-10)
    assert powerlaw.hurwitz_zeta(2.0, 1.0) == pytest.approx(math.pi**2 / 6, rel=1e-12)


# ------------------------------------------------------------ degrees


def test_fox_degree_sequences(fox_digraph):
    idx = fox_digraph.index
    total = powerlaw.degree_sequence(fox_digraph, "all").counts
    assert sorted(total.tolist()) == [1, 2, 2, 2, 2, 2, 2, 3]
    assert total[idx["the"]] == 3 and total[idx["dog"]] == 1
    out = powerlaw.degree_sequence(fox_digraph, "out").counts
    assert out[idx["the"]] == 2 and out[idx["dog"]] == 0 and out.sum() == 8
    assert powerlaw.degree_sequence(fox_digraph, "out").n_zero == 1


def test_self_loop_degree_convention():
    net = network_from_pairs([("a", "a")], "digraph")
    assert powerlaw.degree_sequence(net, "in").counts.tolist() == [1]
    assert powerlaw.degree_sequence(net, "all").counts.tolist() == [2]


def test_in_out_undefined_for_undirected(fox_undigraph2):
    with pytest.raises(UndefinedProperty):
        powerlaw.degree_sequence(fox_undigraph2, "in")


# ------------------------------------------------------------------ MLE


def test_approx_closed_form():
    expected = 1 + 4 / (3 * math.log(2) + math.log(4))
    assert powerlaw.mle_alpha([1, 1, 1, 2], 1, method="approx") == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(2.154, abs=1e-3)


def test_exact_round_trip():
    x = powerlaw.sample_powerlaw(2.5, 1, 50_000, seed=11)
    assert powerlaw.mle_alpha(x, 1) == pytest.approx(2.5, abs=0.05)


@settings(max_examples=30, deadline=None)
@given(st.floats(1.6, 3.5), st.integers(1, 4), st.integers(0, 2**31))
def test_exact_matches_grid_search(alpha, xmin, seed):
    x = powerlaw.sample_powerlaw(alpha, xmin, 400, seed=seed)
    if len(np.unique(x)) < 2:
        return
    assert powerlaw.mle_alpha(x, xmin) == pytest.approx(grid_alpha(x, xmin), abs=1e-3)


def test_mle_errors():
    with pytest.raises(UndefinedProperty):
        powerlaw.mle_alpha([5, 5, 5], 1)
    with pytest.raises(UndefinedProperty):
        powerlaw.mle_alpha([1], 1)
    with pytest.raises(ValueError):
        powerlaw.mle_alpha([0, 1, 2], 1)


# ------------------------------------------------------------------- KS


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 60), min_size=2, max_size=60), st.floats(1.3, 4.0), st.integers(1, 3))
def test_ks_matches_direct_summation(samples, alpha, xmin):
    if sum(s >= xmin for s in samples) == 0:
        return
    assert powerlaw.ks_distance(samples, xmin, alpha) == pytest.approx(oracle_ks(samples, xmin, alpha), abs=1e-9)


def test_select_xmin_brute_force_one_to_ten():
    samples = list(range(1, 11))
    fit = powerlaw.select_xmin(samples)
    scan = []
    for xmin in range(1, 10):
        alpha = powerlaw.mle_alpha(samples, xmin)
        scan.append((oracle_ks(samples, xmin, alpha), xmin))
    best_ks = min(k for k, _ in scan)
    best = min(x for k, x in scan if k - best_ks <= 1e-12)
    assert fit.xmin == best
    assert fit.ks_distance == pytest.approx(best_ks, abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=3, max_size=80))
def test_select_xmin_matches_scan(samples):
    if len(set(samples)) < 2:
        return
    fit = powerlaw.select_xmin(samples)
    scan = []
    for xmin in sorted(set(samples))[:-1]:
        try:
            alpha = powerlaw.mle_alpha(samples, xmin)
        except UndefinedProperty:
            continue
        scan.append((oracle_ks(samples, xmin, alpha), xmin))
    best_ks = min(k for k, _ in scan)
    # alpha is located to 1e-6, which bounds the KS agreement
    assert fit.ks_distance == pytest.approx(best_ks, abs=1e-6)


def test_two_distinct_values_degenerate():
    fit = powerlaw.select_xmin([3, 3, 7, 7, 7])
    assert fit.xmin == 3 and fit.degenerate
    with pytest.raises(UndefinedProperty):
        powerlaw.gof_pvalue([3, 3, 7, 7, 7], fit, B=10)
    with pytest.raises(UndefinedProperty):
        powerlaw.select_xmin([4, 4, 4])


def test_pure_sample_selects_xmin_one():
    hits = sum(powerlaw.select_xmin(powerlaw.sample_powerlaw(2.5, 1, 50_000, seed=s)).xmin == 1 for s in range(50))
    assert hits >= 45


# --------------------------------------------------------------- sampler


def test_sampler_mass_at_xmin():
    x = powerlaw.sample_powerlaw(2.5, 1, 100_000, seed=5)
    p1 = 1 / zeta(2.5, 1)
    assert p1 == pytest.approx(0.7454, abs=1e-4)
    sigma = math.sqrt(p1 * (1 - p1) / len(x))
    assert abs(np.mean(x == 1) - p1) < 3 * sigma


@given(st.floats(1.5, 4.0), st.integers(1, 50), st.integers(0, 2**31))
def test_sampler_support_and_determinism(alpha, xmin, seed):
    a = powerlaw.sample_powerlaw(alpha, xmin, 200, seed=seed)
    b = powerlaw.sample_powerlaw(alpha, xmin, 200, seed=seed)
    assert (a >= xmin).all()
    assert np.array_equal(a, b)


def test_sampler_pmf_chi_square():
    from scipy import stats as sps

    alpha, xmin, n = 2.2, 3, 40_000
    x = powerlaw.sample_powerlaw(alpha, xmin, n, seed=2)
    support = np.arange(xmin, xmin + 15)
    pmf = support.astype(float) ** -alpha / zeta(alpha, xmin)
    observed = np.array([np.sum(x == k) for k in support] + [np.sum(x >= support[-1] + 1)])
    expected = np.append(pmf, 1 - pmf.sum()) * n
    assert sps.chisquare(observed, expected).pvalue > 0.001


# ------------------------------------------------------------- bootstrap


def test_bootstrap_requires_positive_b():
    x = powerlaw.sample_powerlaw(2.5, 1, 200, seed=0)
    fit = powerlaw.fit_powerlaw(x)
    with pytest.raises(ValueError):
        powerlaw.gof_pvalue(x, fit, B=0)


def test_gof_deterministic():
    x = powerlaw.sample_powerlaw(2.5, 1, 300, seed=0)
    fit = powerlaw.fit_powerlaw(x)
    assert powerlaw.gof_pvalue(x, fit, B=20, seed=4) == powerlaw.gof_pvalue(x, fit, B=20, seed=4)


def test_geometric_rejected_with_fixed_xmin():
    rng = np.random.default_rng(0)
    x = rng.geometric(0.3, 10_000)
    fit = powerlaw.fit_powerlaw(x, xmin=1)
    assert powerlaw.gof_pvalue(x, fit, B=50, seed=1, xmin_fixed=1) < 0.05


def test_pvalue_from_replicates():
    reps = np.array([0.1, 0.2, np.nan, 0.3])
    assert powerlaw.pvalue_from_replicates(reps, 0.2) == pytest.approx(2 / 3)
    with pytest.raises(UndefinedProperty):
        powerlaw.pvalue_from_replicates(np.array([np.nan]), 0.1)
