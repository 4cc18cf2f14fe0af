import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hogcycle as hc


class TestAutocorrelation:
    def test_cosine_acf_and_first_zero(self):
        # per-lag Pearson of a sinusoid reproduces cos(2 pi tau); the
        # estimator bias is O(1/overlap), ~2e-3 at 1e4 samples
        t = np.arange(10000) * 0.01
        res = hc.autocorrelation(np.cos(2 * np.pi * t), dt=0.01, max_lag=10.0)
        expected = np.cos(2 * np.pi * res.lags)
        assert np.max(np.abs(res.values - expected)) < 2e-3
        assert res.tau_star == pytest.approx(0.25, abs=0.005)

    def test_cosine_acf_converges_with_window(self):
        t = np.arange(10**5) * 0.01
        res = hc.autocorrelation(np.cos(2 * np.pi * t), dt=0.01, max_lag=10.0)
        assert np.max(np.abs(res.values - np.cos(2 * np.pi * res.lags))) < 1e-3

    def test_lag_zero_is_one_and_values_bounded(self):
        rng = np.random.default_rng(0)
        res = hc.autocorrelation(rng.random(5000), dt=1.0, max_lag=100.0)
        assert res.values[0] == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(res.values)) <= 1.0 + 1e-9

    def test_iid_noise_decorrelates(self):
        rng = np.random.default_rng(1)
        res = hc.autocorrelation(rng.random(10**6), dt=1.0, max_lag=100.0)
        assert np.max(np.abs(res.values[1:])) < 0.01

    def test_negation_invariance(self):
        rng = np.random.default_rng(2)
        y = np.cumsum(rng.standard_normal(4000))
        a = hc.autocorrelation(y, dt=1.0, max_lag=50.0)
        b = hc.autocorrelation(-y, dt=1.0, max_lag=50.0)
        assert np.allclose(a.values, b.values, atol=1e-13)

    def test_constant_series_rejected(self):
        with pytest.raises(hc.DomainError):
            hc.autocorrelation(np.ones(1000), dt=1.0, max_lag=10.0)

    def test_short_series_rejected(self):
        with pytest.raises(hc.DomainError):
            hc.autocorrelation(np.arange(100.0), dt=1.0, max_lag=100.0)

    def test_threshold_flag(self):
        t = np.arange(20000) * 0.01
        res = hc.autocorrelation(np.cos(2 * np.pi * t), dt=0.01, max_lag=5.0)
        assert res.acf_at_tau is not None
        assert res.threshold_ok == (abs(res.acf_at_tau) < 1e-2)


class TestSignReturns:
    def test_geometric_series_all_up(self):
        p = 2.0 ** np.arange(64)
        signs = hc.sign_returns(p, tau=1.0, dt=1.0)
        assert np.all(signs == 1)

    def test_alternating(self):
        p = np.array([1.0, 3.0] * 32)
        signs = hc.sign_returns(p, tau=1.0, dt=1.0)
        assert np.all(signs[::2] == 1) and np.all(signs[1::2] == -1)

    def test_constant_maps_to_plus_one(self):
        signs = hc.sign_returns(np.full(64, 2.5), tau=1.0, dt=1.0)
        assert np.all(signs == 1)

    def test_tau_subsampling(self):
        p = np.exp(np.arange(100) * 0.1)
        signs = hc.sign_returns(p, tau=2.5, dt=0.5)
        assert len(signs) == 19  # floor(99*0.5/2.5) samples after the first

    def test_nonpositive_rejected(self):
        with pytest.raises(hc.DomainError):
            hc.sign_returns(np.array([1.0, 0.0, 2.0] * 10), tau=1.0, dt=1.0)

    def test_tau_below_dt_rejected(self):
        with pytest.raises(hc.DomainError):
            hc.sign_returns(np.ones(10) + 0.1, tau=0.5, dt=1.0)


class TestCombinatorialEntropy:
    def test_constant_sequence_zero(self):
        for k in (1, 3, 7):
            assert hc.combinatorial_entropy(np.ones(100, dtype=int), k) == 0.0

    def test_alternating_is_one_bit(self):
        # exactly two words; their counts are equal when the number of
        # windows (1001 - K) is even, else differ by one
        signs = np.array([1, -1] * 500)
        for k in (1, 3, 5, 7):
            assert hc.combinatorial_entropy(signs, k) == pytest.approx(1.0, abs=1e-12)
        for k in (2, 4, 6, 8):
            assert hc.combinatorial_entropy(signs, k) == pytest.approx(1.0, abs=5e-3)

    def test_fair_iid_reaches_k_bits(self):
        rng = np.random.default_rng(3)
        signs = np.where(rng.random(10**5) < 0.5, 1, -1)
        for k in (1, 4, 8):
            assert hc.combinatorial_entropy(signs, k) == pytest.approx(k, abs=0.05)

    def test_word_longer_than_sequence_rejected(self):
        with pytest.raises(hc.DomainError):
            hc.combinatorial_entropy(np.ones(5, dtype=int), 6)

    @given(
        st.lists(st.sampled_from([-1, 1]), min_size=64, max_size=400),
        st.integers(1, 6),
    )
    def test_bounds(self, seq, k):
        signs = np.array(seq)
        h = hc.combinatorial_entropy(signs, k)
        n_words = len(np.unique([tuple(seq[i : i + k]) for i in range(len(seq) - k + 1)], axis=0))
        assert -1e-12 <= h <= min(k, math.log2(n_words)) + 1e-12

    @given(st.integers(0, 2**32), st.integers(2, 12))
    @settings(max_examples=30, deadline=None)
    def test_monotone_in_k_on_long_sequences(self, seed, k):
        # H_K is non-decreasing in K for a consistent process; with
        # sliding (non-cyclic) windows the word sets of consecutive K
        # differ by one window, bounding any violation by ~log2(M)/M
        rng = np.random.default_rng(seed)
        m = 50 * k
        signs = np.where(rng.random(m) < rng.uniform(0.2, 0.8), 1, -1)
        slack = (math.log2(m) + 2) / (m - k)
        assert hc.combinatorial_entropy(signs, k) >= hc.combinatorial_entropy(
            signs, k - 1
        ) - slack


class TestEntropySlope:
    def test_perfect_line(self):
        ks = np.arange(1, 13)
        slope, corr = hc.entropy_slope(ks, ks.astype(float))
        assert slope == pytest.approx(1.0, abs=1e-12)
        assert corr == pytest.approx(1.0, abs=1e-12)

    def test_flat_table(self):
        ks = np.arange(1, 13)
        slope, _ = hc.entropy_slope(ks, np.full(12, 0.5))
        assert slope == pytest.approx(0.0, abs=1e-12)

    def test_theil_sen_matches_on_clean_line(self):
        ks = np.arange(1, 13)
        hk = 0.6 * ks + 0.1
        slope, corr = hc.entropy_slope(ks, hk, method="theil_sen")
        assert slope == pytest.approx(0.6, abs=1e-12)
        assert corr == pytest.approx(1.0, abs=1e-12)

    def test_too_few_points(self):
        with pytest.raises(hc.DomainError):
            hc.entropy_slope(np.array([1, 2]), np.array([0.5, 1.0]))

    def test_unknown_method(self):
        with pytest.raises(hc.DomainError):
            hc.entropy_slope(np.arange(1, 13), np.arange(1, 13.0), method="huber")


class TestDelayEmbed:
    def test_constant_series(self):
        cloud = hc.delay_embed(np.full(10, 3.3))
        assert cloud.shape == (8, 3)
        assert np.all(cloud == 3.3)

    def test_small_example(self):
        cloud = hc.delay_embed(np.array([1.0, 2, 3, 4, 5]))
        assert np.array_equal(
            cloud, np.array([[1, 2, 3], [2, 3, 4], [3, 4, 5]], dtype=float)
        )

    def test_projection_recovers_series(self):
        rng = np.random.default_rng(4)
        y = rng.random(500)
        cloud = hc.delay_embed(y, dim=3, lag=2)
        assert np.array_equal(cloud[:, 0], y[: len(y) - 4])

    def test_too_short(self):
        with pytest.raises(hc.DomainError):
            hc.delay_embed(np.arange(2.0), dim=3, lag=1)


class TestBoxCount:
    def test_single_point(self):
        assert hc.box_count(np.array([[0.3, 0.4, 0.5]]), 0.1) == 1
        assert hc.box_count(np.array([[0.3, 0.4, 0.5]]), 100.0) == 1

    def test_diagonal_segment(self):
        rng = np.random.default_rng(5)
        t = rng.random(10**5)
        cloud = np.column_stack([t, t, t])
        count = hc.box_count(cloud, 0.01)
        assert abs(count - 100) <= 2

    def test_two_points_one_cell(self):
        pts = np.array([[0.11, 0.11, 0.11], [0.12, 0.12, 0.12]])
        assert hc.box_count(pts, 0.1) == 1

    def test_negative_coordinates(self):
        pts = np.array([[-0.05, 0.0, 0.0], [0.05, 0.0, 0.0]])
        assert hc.box_count(pts, 0.1) == 2  # floor(-0.5) = -1 vs 0

    def test_invalid_epsilon(self):
        with pytest.raises(hc.DomainError):
            hc.box_count(np.zeros((3, 3)), 0.0)

    @given(st.integers(0, 2**32), st.integers(-4, -1))
    @settings(max_examples=20, deadline=None)
    def test_dyadic_refinement_chain(self, seed, log_eps):
        # exact on power-of-two grids: halving the box size at most
        # octuples the count and never lowers it
        rng = np.random.default_rng(seed)
        pts = rng.random((500, 3)) * 3.0
        eps = 2.0**log_eps
        fine = hc.box_count(pts, eps)
        coarse = hc.box_count(pts, 2 * eps)
        assert coarse <= fine <= 8 * coarse


class TestFractalDimension:
    def test_segment_dimension(self):
        rng = np.random.default_rng(6)
        t = rng.random(2 * 10**5)
        fit = hc.fractal_dimension(np.column_stack([t, t, t]))
        assert fit.dimension == pytest.approx(1.0, abs=0.1)
        assert fit.corrcoef < -0.99

    def test_square_dimension(self):
        rng = np.random.default_rng(7)
        xy = rng.random((2 * 10**5, 2))
        cloud = np.column_stack([xy[:, 0], xy[:, 1], np.zeros(len(xy))])
        fit = hc.fractal_dimension(cloud)
        assert fit.dimension == pytest.approx(2.0, abs=0.1)

    def test_counts_non_increasing_in_epsilon(self):
        # origin-anchored grids at unrelated box sizes can re-split a
        # handful of cells, so global monotonicity holds only up to a
        # sliver; within the fit band it holds outright
        rng = np.random.default_rng(8)
        cloud = rng.random((5000, 3))
        fit = hc.fractal_dimension(cloud)
        diffs = np.diff(fit.counts)
        assert np.all(diffs <= np.maximum(2, 0.001 * fit.counts[:-1]))
        assert np.all(diffs[fit.fit_lo : fit.fit_hi - 1] <= 0)
        assert np.all(fit.counts <= len(cloud))

    def test_degenerate_cloud_rejected(self):
        with pytest.raises(hc.DomainError):
            hc.fractal_dimension(np.tile([1.0, 2.0, 3.0], (2000, 1)))

    def test_too_few_points_rejected(self):
        with pytest.raises(hc.DomainError):
            hc.fractal_dimension(np.random.default_rng(0).random((100, 3)))


class TestChaosReport:
    def test_noisy_geometric_walk(self):
        # multiplicative random walk: returns are iid signs, so the
        # entropy grows one bit per symbol and tau* is at the first lag
        rng = np.random.default_rng(9)
        steps = np.where(rng.random(20000) < 0.5, 1.1, 1 / 1.1)
        series = np.cumprod(steps)
        rep = hc.chaos_report(series, dt=1.0, max_lag=100.0, tau=1.0)
        assert rep.slope == pytest.approx(1.0, abs=0.05)
        assert rep.corrcoef > 0.99

    def test_report_fields(self, sp_300k):
        rep = hc.chaos_report(sp_300k.grid["P"][:100000], dt=0.01)
        assert rep.regression_method == "ols"
        assert len(rep.K) == 12 and len(rep.HK) == 12
        assert np.all(np.diff(rep.HK) >= -1e-9)
        assert 0 < rep.tau_star < 100
        assert len(rep.signs) == len(rep.returns)
