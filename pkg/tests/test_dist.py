"""dist-core tests: every pmf builder against an independent exact oracle
(Fractions, exhaustive enumeration, or scipy.stats), plus the Monte-Carlo
estimator's determinism and calibration."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from conckit import rational
from conckit.dist import (
    FiniteDist,
    GeomSumSpec,
    HypergeomSpec,
    ParameterError,
    PoissonBinomialSpec,
    convolve,
    geom_sum_dist,
    moments,
    monte_carlo,
    pmf_binomial,
    pmf_geometric_truncated,
    pmf_hypergeom,
    pmf_poisson_binomial,
    point_mass,
    tail,
    wilson_interval,
)
from conckit.query import TailQuery

TOL = 1e-12


class TestBinomial:
    def test_two_fair_coins(self):
        d = pmf_binomial(2, 0.5)
        assert np.allclose(d.mass, [0.25, 0.5, 0.25], atol=TOL)

    def test_degenerate_p_zero(self):
        d = pmf_binomial(7, 0.0)
        assert d.support.tolist() == [0.0] and d.mass.tolist() == [1.0]

    def test_point_example(self):
        # C(10,5) 0.3^5 0.7^5
        d = pmf_binomial(10, 0.3)
        expect = math.comb(10, 5) * 0.3**5 * 0.7**5
        assert abs(d.point(5) - expect) < TOL
        assert abs(d.point(5) - 0.10292) < 5e-6

    def test_against_rational_oracle(self):
        exact = rational.binomial_pmf(12, Fraction(3, 10))
        d = pmf_binomial(12, 0.3)
        for k, frac in exact.items():
            assert abs(d.point(k) - float(frac)) < 1e-13

    def test_large_n_normalized(self):
        d = pmf_binomial(10**4, 0.37)
        assert abs(d.mass.sum() - 1.0) <= TOL
        assert abs(d.mean() - 3700.0) < 1e-7

    def test_against_scipy(self):
        d = pmf_binomial(40, 0.23)
        ks = np.arange(41)
        assert np.allclose(d.mass, stats.binom.pmf(ks, 40, 0.23), atol=1e-12)

    def test_invalid_params(self):
        with pytest.raises(ParameterError):
            pmf_binomial(-1, 0.5)
        with pytest.raises(ParameterError):
            pmf_binomial(3, 1.5)


class TestPoissonBinomial:
    def test_certain_events(self):
        d = pmf_poisson_binomial(PoissonBinomialSpec((1.0, 1.0, 1.0)))
        assert d.support.tolist() == [3.0] and d.mass.tolist() == [1.0]

    def test_two_outcome_enumeration(self):
        d = pmf_poisson_binomial(PoissonBinomialSpec((0.1, 0.9)))
        assert abs(d.point(1) - 0.82) < TOL

    def test_identical_p_reduces_to_binomial(self):
        pb = pmf_poisson_binomial(PoissonBinomialSpec((0.5,) * 4))
        b = pmf_binomial(4, 0.5)
        assert np.allclose(pb.mass, b.mass, atol=TOL)

    def test_exhaustive_enumeration_100_random_specs(self):
        # spec invariant: n <= 12, agreement to 1e-12 per point
        rng = np.random.default_rng(314159)
        for _ in range(100):
            n = int(rng.integers(1, 13))
            probs = rng.random(n)
            d = pmf_poisson_binomial(PoissonBinomialSpec(tuple(probs)))
            brute = np.zeros(n + 1)
            for bits in itertools.product((0, 1), repeat=n):
                w = math.prod(p if b else 1 - p for p, b in zip(probs, bits))
                brute[sum(bits)] += w
            dense = np.zeros(n + 1)
            for v, m in zip(d.support, d.mass):
                dense[int(v)] = m
            assert np.abs(dense - brute).max() < 1e-12

    def test_variance_formula(self):
        spec = PoissonBinomialSpec((0.1, 0.9))
        d = pmf_poisson_binomial(spec)
        assert abs(d.variance() - 0.18) < TOL


class TestHypergeom:
    def test_six_subset_enumeration(self):
        d = pmf_hypergeom(HypergeomSpec(4, 2, 2))
        assert abs(d.point(1) - 2.0 / 3.0) < TOL

    def test_full_sample_point_mass(self):
        d = pmf_hypergeom(HypergeomSpec(6, 6, 4))
        assert d.support.tolist() == [4.0] and abs(d.mass[0] - 1.0) < TOL

    def test_expectation_nm_over_N(self):
        for N, n, m in ((10, 3, 7), (50, 20, 5), (500, 499, 3)):
            d = pmf_hypergeom(HypergeomSpec(N, n, m))
            assert abs(d.mean() - n * m / N) < 1e-10

    def test_symmetry_in_n_and_m(self):
        a = pmf_hypergeom(HypergeomSpec(30, 12, 7))
        b = pmf_hypergeom(HypergeomSpec(30, 7, 12))
        assert np.array_equal(a.support, b.support)
        assert np.allclose(a.mass, b.mass, atol=1e-14)

    def test_against_rational_oracle(self):
        exact = rational.hypergeom_pmf(20, 8, 11)
        d = pmf_hypergeom(HypergeomSpec(20, 8, 11))
        for k, frac in exact.items():
            assert abs(d.point(k) - float(frac)) < 1e-13


class TestGeometric:
    def test_immediate_success(self):
        d = pmf_geometric_truncated(1.0, 1e-9)
        assert d.support.tolist() == [1.0] and d.tail_deficit == 0.0

    def test_truncation_point_and_pmf(self):
        d = pmf_geometric_truncated(0.5, 1e-9)
        assert d.support[-1] == 30.0  # smallest K with 2^-K <= 1e-9
        assert abs(d.point(3) - 0.125) < TOL
        assert abs(d.tail_deficit - 0.5**30) < 1e-18

    def test_untruncated_mean_is_one_over_p(self):
        d = pmf_geometric_truncated(0.37, 1e-14)
        assert abs(d.mean() - 1.0 / 0.37) < 1e-9

    def test_p_zero_rejected(self):
        with pytest.raises(ParameterError):
            pmf_geometric_truncated(0.0, 1e-9)


class TestConvolve:
    def test_point_masses(self):
        d = convolve(point_mass(2), point_mass(3))
        assert d.support.tolist() == [5.0] and d.mass.tolist() == [1.0]

    def test_bernoulli_sum_is_binomial(self):
        d = convolve(pmf_binomial(1, 0.3), pmf_binomial(1, 0.3))
        b = pmf_binomial(2, 0.3)
        assert np.allclose(d.mass, b.mass, atol=TOL)

    def test_geometric_pair(self):
        g = pmf_geometric_truncated(0.5, 1e-12)
        d = convolve(g, g)
        assert abs(d.point(2) - 0.25) < TOL

    def test_deficit_adds_conservatively(self):
        a = pmf_geometric_truncated(0.5, 1e-6)
        b = pmf_geometric_truncated(0.4, 1e-6)
        c = convolve(a, b)
        assert c.tail_deficit <= a.tail_deficit + b.tail_deficit + 1e-18

    @given(
        st.lists(st.floats(0.05, 0.95), min_size=1, max_size=5),
        st.lists(st.floats(0.05, 0.95), min_size=1, max_size=5),
    )
    @settings(max_examples=40, deadline=None)
    def test_convolution_matches_poisson_binomial(self, ps, qs):
        left = pmf_poisson_binomial(PoissonBinomialSpec(tuple(ps)))
        right = pmf_poisson_binomial(PoissonBinomialSpec(tuple(qs)))
        joint = pmf_poisson_binomial(PoissonBinomialSpec(tuple(ps + qs)))
        conv = convolve(left, right)
        assert np.allclose(conv.mass, joint.mass, atol=1e-12)


class TestGeomSum:
    def test_single_variable(self):
        spec = GeomSumSpec((0.5,))
        d = geom_sum_dist(spec, 1e-9)
        g = pmf_geometric_truncated(0.5, 1e-9)
        assert np.allclose(d.mass, g.mass, atol=TOL)

    def test_negative_binomial_identity_example(self):
        # Pr[X >= 10] = Pr[Bin(9, 1/2) <= 2] = 46/512
        d = geom_sum_dist(GeomSumSpec((0.5,) * 3), 1e-12)
        assert abs(d.upper_tail(10) - 46 / 512) < 1e-10

    def test_negative_binomial_identity_sweep(self):
        # Pr[sum Geom(p) <= K] = Pr[Bin(K, p) >= n] for K in [n..4n/p]
        for p, n in ((0.5, 3), (0.3, 4), (0.8, 6)):
            d = geom_sum_dist(GeomSumSpec((p,) * n), 1e-14)
            for K in range(n, int(4 * n / p) + 1):
                lhs = d.lower_tail(K)
                rhs = pmf_binomial(K, p).upper_tail(n)
                assert abs(lhs - rhs) < 1e-10, (p, n, K)

    def test_mean_close_to_sum_of_inverses(self):
        spec = GeomSumSpec((0.2, 0.5, 0.9))
        eps = 1e-9
        d = geom_sum_dist(spec, eps)
        assert abs(d.mean() - spec.mean()) <= eps * d.support[-1]


class TestTailAndMoments:
    def test_tail_examples(self):
        d = pmf_binomial(20, 0.5)
        assert abs(tail(d, TailQuery.upper_at(12)) - 263950 / 1048576) < TOL
        assert tail(d, TailQuery.upper_at(0)) == 1.0
        d10 = pmf_binomial(10, 0.5)
        assert abs(tail(d10, TailQuery.upper_at(8)) - 56 / 1024) < TOL

    def test_upper_tail_includes_deficit(self):
        g = pmf_geometric_truncated(0.5, 1e-6)
        beyond = g.support[-1] + 5
        assert g.upper_tail(beyond) == g.tail_deficit

    def test_moments_examples(self):
        assert moments(point_mass(4.5)) == (4.5, 0.0)
        d = pmf_binomial(30, 0.4)
        mean, var = moments(d)
        assert abs(mean - 12.0) < 1e-10
        assert abs(var - 30 * 0.4 * 0.6) < 1e-9

    def test_multiplicative_query_resolution(self):
        d = pmf_binomial(20, 0.5)
        q = TailQuery.upper_multiplicative(0.2)
        assert abs(tail(d, q) - d.upper_tail(12)) < TOL

    def test_estimate_reference_shifts_threshold(self):
        d = pmf_binomial(20, 0.5)
        q = TailQuery.upper_multiplicative(0.2, reference="upper_estimate", ref_value=12.0)
        assert abs(tail(d, q) - d.upper_tail(14.4)) < TOL


class TestNormalizationInvariant:
    @given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=40))
    @settings(max_examples=60, deadline=None)
    def test_poisson_binomial_normalized(self, probs):
        d = pmf_poisson_binomial(PoissonBinomialSpec(tuple(probs)))
        assert abs(d.mass.sum() + d.tail_deficit - 1.0) <= 1e-12

    def test_invalid_dist_rejected(self):
        with pytest.raises(ParameterError):
            FiniteDist(np.array([0.0, 1.0]), np.array([0.5, 0.4]))
        with pytest.raises(ParameterError):
            FiniteDist(np.array([1.0, 0.0]), np.array([0.5, 0.5]))
        with pytest.raises(ParameterError):
            FiniteDist(np.array([0.0]), np.array([1.0]), tail_deficit=-0.1)


class TestSerialization:
    def test_json_round_trip(self):
        d = pmf_binomial(6, 0.3)
        back = FiniteDist.from_json(d.to_json())
        assert np.array_equal(back.support, d.support)
        assert np.array_equal(back.mass, d.mass)

    def test_csv_columns(self):
        d = pmf_binomial(2, 0.5)
        lines = d.to_csv().strip().splitlines()
        assert lines[0] == "value,mass,cdf"
        assert len(lines) == 4
        last = lines[-1].split(",")
        assert abs(float(last[2]) - 1.0) < 1e-9


class TestMonteCarlo:
    def test_always_true(self):
        est = monte_carlo(lambda rng, k: k, trials=100, seed=1)
        assert est.point == 1.0 and est.ci_high == 1.0

    def test_always_false(self):
        est = monte_carlo(lambda rng, k: 0, trials=100, seed=1)
        assert est.point == 0.0 and est.ci_low == 0.0

    def test_fair_coin_interval_contains_half(self):
        est = monte_carlo(lambda rng, k: int((rng.random(k) < 0.5).sum()), trials=10**6, seed=99, confidence=0.99)
        assert est.ci_low <= 0.5 <= est.ci_high

    def test_seed_reproducibility(self):
        sampler = lambda rng, k: int((rng.random(k) < 0.3).sum())
        a = monte_carlo(sampler, trials=12345, seed=7, confidence=0.95)
        b = monte_carlo(sampler, trials=12345, seed=7, confidence=0.95)
        assert a == b

    def test_parallel_matches_serial(self):
        sampler = lambda rng, k: int((rng.random(k) < 0.3).sum())
        a = monte_carlo(sampler, trials=200_000, seed=7, jobs=1)
        b = monte_carlo(sampler, trials=200_000, seed=7, jobs=4)
        assert a == b

    def test_wilson_calibration(self):
        # over 200 seeded runs on Bernoulli(0.3), the 95% interval covers 0.3
        # in at least 90% of runs
        sampler = lambda rng, k: int((rng.random(k) < 0.3).sum())
        covered = 0
        for seed in range(200):
            est = monte_carlo(sampler, trials=2000, seed=seed, confidence=0.95)
            covered += est.ci_low <= 0.3 <= est.ci_high
        assert covered >= 180

    def test_wilson_interval_order(self):
        lo, hi = wilson_interval(3, 10, 0.95)
        assert 0.0 <= lo <= 0.3 <= hi <= 1.0
