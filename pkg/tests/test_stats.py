import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from udmis import stats as S
from udmis.graph import UnitDiskGraph
from udmis.shots import from_probabilities

EDGE = UnitDiskGraph.from_points([(0, 0), (0.5, 0)])


def edge_dist(probs):
    return from_probabilities(EDGE, [0, 1, 2], probs)


def random_support(draw_rng, k):
    values = np.sort(draw_rng.uniform(0, 1, k))
    probs = draw_rng.dirichlet(np.ones(k))
    return values, probs


probs_st = st.lists(st.floats(0.01, 1.0), min_size=1, max_size=5)


def test_mean_ratio_examples():
    assert S.mean_ratio(edge_dist([1, 1, 1]), 1) == pytest.approx(2 / 3)
    assert S.mean_ratio(edge_dist([0, 1, 0]), 1) == 1.0
    assert S.mean_ratio(edge_dist([1, 0, 0]), 1) == 0.0


def test_expected_max_examples():
    cdf = S.EnergyCDF.from_values([0.0, 1.0], [0.5, 0.5])
    assert cdf.expected_max(2) == pytest.approx(0.75)
    d = edge_dist([0.7, 0.2, 0.1])
    assert S.expected_max_ratio(d, 1, 1) == pytest.approx(S.mean_ratio(d, 1))
    assert S.expected_max_ratio(d, 10**6, 1) == pytest.approx(1.0, abs=1e-3)
    assert cdf(1.0) == 1.0 and cdf(-0.1) == 0.0 and cdf(0.5) == 0.5
    with pytest.raises(ValueError):
        cdf.expected_max(0)


@settings(max_examples=40)
@given(probs=probs_st, seed=st.integers(0, 10**6), n=st.integers(1, 4))
def test_expected_max_matches_enumeration(probs, seed, n):
    rng = np.random.default_rng(seed)
    values = rng.uniform(-1, 1, len(probs))
    p = np.array(probs) / sum(probs)
    closed = S.EnergyCDF.from_values(values, p).expected_max(n)
    assert abs(closed - S.brute_force_expected_max(values, p, n)) < 1e-12


def test_expected_max_matches_sampling():
    rng = np.random.default_rng(11)
    v, p = random_support(rng, 6)
    mean, se = S.sampled_expected_max(v, p, 5, rng=rng)
    assert abs(S.EnergyCDF.from_values(v, p).expected_max(5) - mean) < 3 * se


@settings(max_examples=40)
@given(probs=st.lists(st.floats(0.01, 1.0), min_size=3, max_size=3))
def test_integral_forms_agree_and_monotone(probs):
    d = edge_dist(probs)
    prev = S.mean_ratio(d, 1) - 1e-12
    for n in (1, 2, 3, 10, 100):
        a = S.expected_max_ratio(d, n, 1)
        assert a == pytest.approx(S.expected_max_ratio_normalized(d, n, 1), abs=1e-12)
        assert prev <= a + 1e-12 <= 1 + 1e-12
        prev = a
    # energy form: M(N) on -E equals ratio times |S*|
    assert S.expected_max_energy(d, 3) == pytest.approx(S.expected_max_ratio(d, 3, 1))


def test_spin_correlations():
    c = S.spin_correlations(([0], [1.0], 3))
    assert np.array_equal(c, np.ones((3, 3)))
    # hand distribution: states 0b001 (0.5), 0b110 (0.3), 0b000 (0.2)
    c = S.spin_correlations(([1, 6, 0], [0.5, 0.3, 0.2], 3))
    z = {1: [-1, 1, 1], 6: [1, -1, -1], 0: [1, 1, 1]}
    ref = sum(p * np.outer(z[s], z[s]) for s, p in zip([1, 6, 0], [0.5, 0.3, 0.2]))
    assert np.allclose(c, ref)
    assert np.allclose(np.diag(c), 1)


def test_binned_g2_single_pair_and_bins():
    corr = np.array([[1, -0.7], [-0.7, 1]])
    cur = S.binned_g2([(corr, [(0, 0), (0.5, 0)])])
    assert len(cur.values) == 1 and cur.values[0] == pytest.approx(0.7)
    assert cur.centers[0] - 0.02 <= 0.5 < cur.centers[0] + 0.02
    with pytest.raises(S.FitError):
        S.binned_g2([])
    with pytest.raises(ValueError):
        S.binned_g2([(corr, [(0, 0), (0.5, 0)])], mode="median")


def test_binned_g2_recovers_envelope():
    rng = np.random.default_rng(3)
    samples = []
    for _ in range(5):
        pts = rng.uniform(0, 4, size=(40, 2))
        d = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
        samples.append((np.exp(-d / 2) * np.cos(6 * d), pts))
    cur = S.binned_g2(samples)
    assert np.all(np.diff(cur.centers) > cur.delta_r - 1e-12)  # disjoint
    assert np.all(cur.values <= np.exp(-(cur.centers - cur.delta_r / 2) / 2) + 1e-12)
    # one peak per half period of cos(6d); the peaks trace exp(-d/2)
    half = np.pi / 6
    win = np.floor(cur.centers / half).astype(int)
    peaks = [(cur.centers[win == w][np.argmax(cur.values[win == w])], cur.values[win == w].max())
             for w in np.unique(win)[:5]]
    r, y = np.array(peaks).T
    assert np.all(y / np.exp(-r / 2) > 0.95)
    assert S.fit_xi((r, y), intercept=True).xi == pytest.approx(2.0, rel=0.1)


def test_fit_xi_synthetic():
    r = np.arange(0.02, 3.0, 0.04)
    fit = S.fit_xi((r, np.exp(-r / 1.4)))
    assert fit.xi == pytest.approx(1.4, rel=1e-3)
    assert fit.residual < 1e-12
    fit2 = S.fit_xi((r, 0.5 * np.exp(-r / 2.3)), intercept=True)
    assert fit2.xi == pytest.approx(2.3, rel=1e-9)
    assert fit2.intercept == pytest.approx(math.log(0.5))
    with pytest.raises(S.FitError):
        S.fit_xi(([0.1, 0.2, 0.3], [0.5, 0.0, -0.1]))


def test_n_star():
    assert S.n_star(2, 3.9) == 30
    assert S.n_star(2, 1.4) == 4
    assert S.CorrFit(1.4, 0.0, 3).n_star == 4


def test_extrapolation_recovers_beta():
    rows = [(n, N, 0.9 + 0.8 * math.sqrt(math.log(N) / (2 * n))) for n in (20, 50, 100) for N in (1, 10, 100)]
    fit = S.fit_extrapolation(rows, 0.9)
    assert abs(fit.beta - 0.8) < 1e-6
    y, lo, hi = fit.predict(8000, 1)
    assert y == pytest.approx(0.9)
    y, lo, hi = fit.predict(8000, 10)
    assert y == pytest.approx(0.9 + fit.beta * math.sqrt(math.log(10) / 16000))
    assert lo <= y <= hi


def test_extrapolation_interval_and_errors():
    rng = np.random.default_rng(0)
    rows = [(n, N, 0.85 + 0.5 * math.sqrt(math.log(N) / (2 * n)) + rng.normal(0, 0.01))
            for n in (10, 20, 40) for N in (2, 10, 100)]
    fit = S.fit_extrapolation(rows, 0.85)
    y, lo, hi = fit.predict(8000, 10)
    assert np.isfinite(lo) and np.isfinite(hi) and lo < y < hi
    assert fit.dof == len(rows) - 1
    with pytest.raises(S.FitError):
        S.fit_extrapolation(rows[:2], 0.85)
    with pytest.raises(S.FitError):
        S.fit_extrapolation([(10, 1, 0.9)] * 4, 0.85)


def test_gaussian_bound():
    rows = S.gaussian_bound_check()
    assert all(r.ok for r in rows)
    assert S.bound_rows_monotone(rows)
    assert all(r.alpha == pytest.approx(0.5, abs=1e-12) for r in rows if r.N == 1)
    r = next(r for r in rows if r.S == 64 and r.N == 100)
    assert r.alpha <= 0.5 + math.sqrt(math.log(100) / 128) + 0.05
    assert all(r.scaled <= r.half_log_n + 0.05 * r.S ** 0.5 for r in rows)


def test_bootstrap_increasing():
    rng = np.random.default_rng(1)
    base = rng.normal(0.8, 0.01, 50)
    assert S.bootstrap_increasing([base, base + 0.02, base + 0.04], rng=0) == 1.0
    assert S.bootstrap_increasing([base + 0.04, base], rng=0) == 0.0
    s = S.summarize([1, 1, 1], quantile_of=[5, 5, 5])
    assert s.mean == 1 and s.sem == 0 and s.q90 == 5
