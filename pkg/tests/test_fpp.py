"""Fractional Poisson process: pmf, moments, simulation, bivariate law."""

import math

import numpy as np
import pytest
from scipy import integrate, stats as sps

from tcfpp.exceptions import DomainError, NonConvergenceError
from tcfpp.fpp import (
    FppParams,
    batch_counts,
    fpp_bivariate_pmf,
    fpp_covariance,
    fpp_mean,
    fpp_pmf,
    fpp_simulate,
    fpp_variance,
    ml_waiting_times,
)
from tcfpp.rng import RngStream
from tcfpp.specfun import mittag_leffler
from tcfpp.stats import EmpiricalPmf, chi_square_gof, ks_two_sample

from _goldens import FPP_PMF_GOLDEN


class TestPmf:
    def test_zero_count_is_mittag_leffler(self):
        params = FppParams(lam=2.0, beta=0.9)
        assert fpp_pmf(params, 0, 1.0) == mittag_leffler(0.9, -2.0)

    def test_poisson_reduction(self):
        params = FppParams(lam=1.5, beta=1.0)
        ref = math.exp(-3.0) * 3.0**3 / math.factorial(3)
        assert fpp_pmf(params, 3, 2.0) == pytest.approx(ref, rel=1e-13)

    def test_extended_precision_golden(self):
        params = FppParams(lam=1.5, beta=0.6)
        assert fpp_pmf(params, 2, 1.0) == pytest.approx(FPP_PMF_GOLDEN, rel=1e-11)

    def test_time_zero(self):
        params = FppParams(lam=1.5, beta=0.6)
        assert fpp_pmf(params, 0, 0.0) == 1.0
        assert fpp_pmf(params, 3, 0.0) == 0.0

    def test_normalization_adaptive(self):
        for beta, lam in ((0.6, 1.5), (0.9, 2.0)):
            params = FppParams(lam=lam, beta=beta)
            cum, n = 0.0, 0
            while cum < 1.0 - 1e-8 and n < 200:
                p = fpp_pmf(params, n, 1.0)
                assert 0.0 <= p <= 1.0
                cum += p
                n += 1
            assert cum >= 1.0 - 1e-8

    def test_series_range_guard(self):
        with pytest.raises(NonConvergenceError):
            fpp_pmf(FppParams(lam=2.0, beta=0.6), 1, 200.0)

    def test_validation(self):
        params = FppParams(lam=1.0, beta=0.5)
        with pytest.raises(DomainError):
            fpp_pmf(params, -1, 1.0)
        with pytest.raises(DomainError):
            fpp_pmf(params, 0, -1.0)
        with pytest.raises(DomainError):
            FppParams(lam=0.0, beta=0.5)
        with pytest.raises(DomainError):
            FppParams(lam=1.0, beta=1.5)


class TestMoments:
    def test_poisson_reduction(self):
        params = FppParams(lam=2.0, beta=1.0)
        assert fpp_mean(params, 3.0) == pytest.approx(6.0, rel=1e-14)
        assert fpp_variance(params, 3.0) == pytest.approx(6.0, rel=1e-12)

    def test_half_index_mean(self):
        params = FppParams(lam=1.0, beta=0.5)
        assert fpp_mean(params, 1.0) == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-14)

    def test_simulation_agreement(self):
        params = FppParams(lam=1.5, beta=0.6)
        counts = batch_counts(params, np.full((100_000, 1), 2.0), RngStream(21))
        x = counts[:, 0].astype(float)
        se = x.std(ddof=1) / math.sqrt(x.size)
        assert abs(x.mean() - fpp_mean(params, 2.0)) < 4.0 * se
        var_se = ((x - x.mean()) ** 2).std(ddof=1) / math.sqrt(x.size)
        assert abs(x.var(ddof=1) - fpp_variance(params, 2.0)) < 4.0 * var_se


class TestCovariance:
    def test_poisson_reduction(self):
        params = FppParams(lam=2.0, beta=1.0)
        assert fpp_covariance(params, 1.0, 3.0) == pytest.approx(2.0, abs=1e-10)

    def test_equal_times_match_variance(self):
        params = FppParams(lam=1.5, beta=0.6)
        assert fpp_covariance(params, 2.0, 2.0) == pytest.approx(
            fpp_variance(params, 2.0), abs=1e-12
        )

    def test_zero_limit(self):
        assert fpp_covariance(FppParams(lam=1.5, beta=0.6), 0.0, 2.0) == 0.0

    def test_argument_order_enforced(self):
        with pytest.raises(DomainError):
            fpp_covariance(FppParams(lam=1.5, beta=0.6), 2.0, 1.0)

    def test_nondecreasing_in_t(self):
        params = FppParams(lam=1.5, beta=0.6)
        ts = np.linspace(1.0, 20.0, 40)
        vals = [fpp_covariance(params, 1.0, t) for t in ts]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_simulation_agreement(self):
        params = FppParams(lam=1.5, beta=0.6)
        counts = batch_counts(
            params, np.broadcast_to([1.0, 2.0], (100_000, 2)).copy(), RngStream(22)
        )
        x, y = counts[:, 0].astype(float), counts[:, 1].astype(float)
        n = x.size
        w = (x - x.mean()) * (y - y.mean())
        se = w.std(ddof=1) / math.sqrt(n)
        assert abs(np.dot(x - x.mean(), y - y.mean()) / (n - 1) - fpp_covariance(params, 1.0, 2.0)) < 4.0 * se


class TestSimulation:
    def test_waiting_times_reduce_to_exponential_at_beta_one(self):
        gen = RngStream(23).generator()
        w = ml_waiting_times(FppParams(lam=2.0, beta=1.0), gen, (20_000,))
        ref = gen.exponential(scale=0.5, size=20_000)
        assert ks_two_sample(w, ref)["p_value"] > 0.01

    def test_terminal_count_mean(self):
        params = FppParams(lam=1.5, beta=0.6)
        counts = batch_counts(params, np.full((10_000, 1), 5.0), RngStream(24))
        x = counts[:, 0].astype(float)
        se = x.std(ddof=1) / math.sqrt(x.size)
        assert abs(x.mean() - fpp_mean(params, 5.0)) < 4.0 * se

    def test_bit_identical_event_lists(self):
        params = FppParams(lam=1.5, beta=0.6)
        a = fpp_simulate(params, 5.0, RngStream(42, 1))
        b = fpp_simulate(params, 5.0, RngStream(42, 1))
        assert np.array_equal(a.events, b.events)

    def test_path_structure(self):
        path = fpp_simulate(FppParams(lam=3.0, beta=0.8), 4.0, RngStream(25))
        assert path.kind == "counting"
        assert np.all(path.events <= 4.0)
        assert np.array_equal(path.values, np.arange(len(path)))

    def test_counts_reproduce_pmf_chi_square(self):
        for seed_offset, beta in ((0, 0.6), (1, 0.9)):
            params = FppParams(lam=1.5, beta=beta)
            counts = batch_counts(
                params, np.full((100_000, 1), 1.0), RngStream(26, seed_offset)
            )
            emp = EmpiricalPmf.from_samples(counts[:, 0])
            res = chi_square_gof(emp, lambda k: fpp_pmf(params, k, 1.0))
            assert res["p_value"] > 0.01, (beta, res)

    def test_engines_agree_in_distribution(self):
        params = FppParams(lam=1.5, beta=0.7)
        a = batch_counts(params, np.full((20_000, 1), 2.0), RngStream(27), engine="numpy")
        b = batch_counts(params, np.full((20_000, 1), 2.0), RngStream(28))
        assert ks_two_sample(a[:, 0], b[:, 0])["p_value"] > 0.01


class TestBivariate:
    params = FppParams(lam=1.0, beta=0.7)

    def test_zero_zero_reduces_to_survival(self):
        assert fpp_bivariate_pmf(self.params, 0, 0, 1.0, 2.0) == mittag_leffler(
            0.7, -(2.0**0.7)
        )

    def test_poisson_closed_form(self):
        val = fpp_bivariate_pmf(FppParams(lam=1.0, beta=1.0), 1, 2, 1.0, 2.0)
        assert val == pytest.approx(math.exp(-2.0), abs=1e-8)

    def test_poisson_diagonal_closed_form(self):
        # n = m: lam^m s^m e^{-lam t} / m!
        val = fpp_bivariate_pmf(FppParams(lam=1.0, beta=1.0), 2, 2, 1.0, 2.5)
        assert val == pytest.approx(math.exp(-2.5) / 2.0, rel=1e-7)

    def test_monte_carlo_frequency(self):
        prob = fpp_bivariate_pmf(self.params, 1, 1, 1.0, 2.0)
        counts = batch_counts(
            self.params, np.broadcast_to([1.0, 2.0], (100_000, 2)).copy(), RngStream(29)
        )
        freq = np.logical_and(counts[:, 0] == 1, counts[:, 1] == 1).mean()
        se = math.sqrt(freq * (1.0 - freq) / counts.shape[0])
        assert abs(freq - prob) < 4.0 * se

    def test_triple_form_cross_check(self):
        # m = 0 cases keep the three-level nesting affordable; the m >= 1
        # outer layer is the same substitution machinery as the double form
        for m, n, tol in ((0, 2, 1e-8), (0, 3, 1e-7)):
            double = fpp_bivariate_pmf(self.params, m, n, 1.0, 2.0)
            triple = fpp_bivariate_pmf(self.params, m, n, 1.0, 2.0, quad_tol=tol, use_triple=True)
            assert double == pytest.approx(triple, rel=1e-6), (m, n)

    def test_truncated_grid_normalization(self):
        total = 0.0
        for n in range(14):
            for m in range(n + 1):
                total += fpp_bivariate_pmf(self.params, m, n, 1.0, 2.0, quad_tol=1e-7)
        assert total >= 1.0 - 1e-4

    def test_marginal_consistency(self):
        # summing the two-time law over the earlier count recovers the
        # one-time pmf at the later time
        from tcfpp.fpp import fpp_pmf

        for n in range(4):
            s = sum(fpp_bivariate_pmf(self.params, m, n, 1.0, 2.0) for m in range(n + 1))
            assert s == pytest.approx(fpp_pmf(self.params, n, 2.0), rel=1e-6)

    def test_validation(self):
        with pytest.raises(DomainError):
            fpp_bivariate_pmf(self.params, 1, 0, 1.0, 2.0)
        with pytest.raises(DomainError):
            fpp_bivariate_pmf(self.params, 0, 0, 2.0, 1.0)


class TestQuadratureOracle:
    def test_diagonal_case_against_direct_quadrature(self):
        # independent route: integrate the arrival density times survival
        # directly (no substitution), using scipy with a singular-point hint
        params = FppParams(lam=1.0, beta=0.7)
        m, s, t = 1, 1.0, 2.0
        b = params.beta

        def integrand(u):
            from tcfpp.specfun import gen_mittag_leffler

            return (
                u ** (m * b - 1.0)
                * gen_mittag_leffler(b, m * b, float(m), -params.lam * u**b)
                * mittag_leffler(b, -params.lam * (t - u) ** b)
            )

        ref, _ = integrate.quad(integrand, 0.0, s, points=[0.0], limit=300)
        ref *= params.lam**m
        assert fpp_bivariate_pmf(params, m, m, s, t) == pytest.approx(ref, rel=1e-8)
