"""Monte Carlo harness: estimators, tests, and merge identities."""

import math

import numpy as np
import pytest

from tcfpp.exceptions import DomainError
from tcfpp.rng import RngStream
from tcfpp.stats import (
    EmpiricalPmf,
    MonteCarloEstimate,
    chi_square_gof,
    estimate_covariance,
    estimate_moment,
    fit_log_slope,
    ks_two_sample,
)


class TestEstimators:
    def test_constant_samples_have_zero_se(self):
        est = estimate_moment(np.full(100, 3.0))
        assert est.value == 3.0 and est.std_error == 0.0

    def test_identical_pairs_covariance_equals_variance(self):
        x = RngStream(1).generator().normal(size=5000)
        cov = estimate_covariance(x, x)
        assert cov.value == pytest.approx(x.var(ddof=1), rel=1e-12)

    def test_standard_normal_mean_within_four_se(self):
        x = RngStream(2).generator().standard_normal(100_000)
        est = estimate_moment(x)
        assert abs(est.value) < 4.0 / math.sqrt(est.n)

    def test_small_sample_rejected(self):
        with pytest.raises(DomainError):
            estimate_moment([1.0])
        with pytest.raises(DomainError):
            estimate_covariance([1.0], [2.0])


class TestMergeIdentities:
    def _random_estimates(self, seed):
        gen = RngStream(seed).generator()
        return [
            estimate_moment(gen.normal(loc=mu, size=n))
            for mu, n in ((0.0, 400), (1.0, 850), (-2.0, 123))
        ]

    def test_merge_matches_pooled_sample(self):
        gen = RngStream(3).generator()
        x = gen.normal(size=1000)
        whole = estimate_moment(x)
        merged = estimate_moment(x[:400]).merge(estimate_moment(x[400:]))
        assert merged.value == pytest.approx(whole.value, abs=1e-14)
        assert merged.std_error == pytest.approx(whole.std_error, rel=1e-12)
        assert merged.n == whole.n

    def test_merge_commutative_and_associative(self):
        a, b, c = self._random_estimates(4)
        ab_c = a.merge(b).merge(c)
        a_bc = a.merge(b.merge(c))
        ba_c = b.merge(a).merge(c)
        for other in (a_bc, ba_c):
            assert ab_c.value == pytest.approx(other.value, abs=1e-12)
            assert ab_c.std_error == pytest.approx(other.std_error, rel=1e-12)

    def test_validation(self):
        with pytest.raises(DomainError):
            MonteCarloEstimate(value=0.0, std_error=-1.0, n=10)
        with pytest.raises(DomainError):
            MonteCarloEstimate(value=0.0, std_error=0.0, n=0)


class TestKsTwoSample:
    def test_equal_samples(self):
        x = np.linspace(0.0, 1.0, 200)
        res = ks_two_sample(x, x)
        assert res["statistic"] == 0.0 and res["p_value"] == 1.0

    def test_disjoint_supports(self):
        res = ks_two_sample(np.arange(100.0), np.arange(100.0) + 1000.0)
        assert res["statistic"] == 1.0

    def test_null_calibration(self):
        # same sampler twice: p > 0.01 expected in ~99% of repetitions
        fails = 0
        for seed in range(100):
            gen = RngStream(777, seed).generator()
            a = gen.standard_normal(5000)
            b = gen.standard_normal(5000)
            if ks_two_sample(a, b)["p_value"] <= 0.01:
                fails += 1
        assert fails <= 2

    def test_small_sample_rejected(self):
        with pytest.raises(DomainError):
            ks_two_sample(np.arange(10.0), np.arange(100.0))


class TestFitLogSlope:
    def test_exact_power_law(self):
        ts = np.linspace(2.0, 50.0, 20)
        fit = fit_log_slope(ts, 3.7 * ts**-0.6)
        assert fit["slope"] == pytest.approx(-0.6, abs=1e-12)

    def test_constant_values(self):
        fit = fit_log_slope(np.linspace(1.0, 9.0, 9), np.full(9, 2.5))
        assert fit["slope"] == pytest.approx(0.0, abs=1e-14)

    def test_noisy_power_law(self):
        gen = RngStream(11).generator()
        ts = np.geomspace(1.0, 100.0, 20)
        values = 2.0 * ts**-0.8 * np.exp(gen.normal(scale=0.05, size=20))
        fit = fit_log_slope(ts, values)
        assert abs(fit["slope"] + 0.8) < 0.1

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            fit_log_slope([1.0, 2.0, 3.0, 4.0], [1.0, 1.0, 1.0, 1.0])
        with pytest.raises(DomainError):
            fit_log_slope(np.arange(1.0, 9.0), np.concatenate(([0.0], np.ones(7))))


class TestChiSquareGof:
    def test_point_mass_match(self):
        emp = EmpiricalPmf(counts={0: 1000}, n=1000)
        res = chi_square_gof(emp, lambda k: 1.0 if k == 0 else 0.0)
        assert res["statistic"] == 0.0

    def test_null_calibration_poisson(self):
        from scipy import stats as sps

        lam = 3.0
        fails = 0
        for seed in range(100):
            gen = RngStream(888, seed).generator()
            emp = EmpiricalPmf.from_samples(gen.poisson(lam, size=20_000))
            res = chi_square_gof(emp, lambda k: sps.poisson.pmf(k, lam))
            if res["p_value"] <= 0.01:
                fails += 1
        assert fails <= 3

    def test_power_against_wrong_rate(self):
        from scipy import stats as sps

        gen = RngStream(999).generator()
        emp = EmpiricalPmf.from_samples(gen.poisson(3.0, size=100_000))
        res = chi_square_gof(emp, lambda k: sps.poisson.pmf(k, 6.0))
        assert res["p_value"] < 1e-6

    def test_small_sample_rejected(self):
        emp = EmpiricalPmf(counts={0: 100}, n=100)
        with pytest.raises(DomainError):
            chi_square_gof(emp, lambda k: 1.0 if k == 0 else 0.0)


class TestEmpiricalPmf:
    def test_counts_match_total(self):
        emp = EmpiricalPmf.from_samples([0, 1, 1, 2, 2, 2])
        assert emp.counts == {0: 1, 1: 2, 2: 3} and emp.n == 6

    def test_inconsistent_total_rejected(self):
        with pytest.raises(DomainError):
            EmpiricalPmf(counts={0: 2}, n=3)
