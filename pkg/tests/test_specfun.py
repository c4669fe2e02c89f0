"""Special-function tests against frozen high-precision oracles.

Golden values in _goldens.py were computed by independent routes (extended
precision series, tanh-sinh quadrature of raw integrands); see that module's
docstring.
"""

import math

import numpy as np
import pytest

from tcfpp.exceptions import DomainError, NonConvergenceError
from tcfpp.specfun import (
    MLSeriesControl,
    bessel_k,
    bessel_k_scaled,
    gen_mittag_leffler,
    incomplete_beta,
    log_gamma,
    mittag_leffler,
)

from _goldens import BESSELK_GOLDENS, GML_GOLDENS, INCBETA_GOLDENS, ML_GOLDENS


class TestMittagLeffler:
    def test_only_first_term_at_zero(self):
        assert mittag_leffler(0.7, 0.0) == 1.0

    def test_exponential_at_alpha_one(self):
        assert mittag_leffler(1.0, 1.0) == pytest.approx(math.e, rel=1e-14)

    def test_extended_precision_goldens(self):
        for alpha, z, ref in ML_GOLDENS:
            assert mittag_leffler(alpha, z) == pytest.approx(ref, rel=1e-9), (alpha, z)

    def test_matches_three_parameter_specialization(self):
        # sampled inside the region where both alternating sums keep >= 12
        # digits; heavier cancellation raises NonConvergenceError instead
        rng = np.random.default_rng(2024)
        for _ in range(40):
            alpha = rng.uniform(0.4, 1.0)
            z = rng.uniform(-2.0, 1.5)
            assert mittag_leffler(alpha, z) == pytest.approx(
                gen_mittag_leffler(alpha, 1.0, 1.0, z), rel=1e-12
            )

    def test_cancellation_detector(self):
        # small alpha with moderate negative z peaks ~e^56 above the result;
        # returning a float64 sum there would be meaningless
        with pytest.raises(NonConvergenceError):
            mittag_leffler(0.34, -4.0)

    def test_completely_monotone_on_negative_axis(self):
        # restricted check: values in (0, 1], nonincreasing in |z|; indices
        # sampled where the full [-5, 0] range keeps >= 10 digits (alpha=0.5
        # at z=-5 trips the cancellation detector by design)
        for alpha in (0.6, 0.75, 0.9):
            zs = np.linspace(0.0, 5.0, 41)
            vals = [mittag_leffler(alpha, -z) for z in zs]
            assert all(0.0 < v <= 1.0 for v in vals)
            assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            mittag_leffler(0.0, 1.0)
        with pytest.raises(DomainError):
            mittag_leffler(1.2, 1.0)
        with pytest.raises(DomainError):
            mittag_leffler(0.5, math.inf)

    def test_cancellation_guard_on_large_negative_argument(self):
        with pytest.raises(NonConvergenceError):
            mittag_leffler(0.6, -35.5)

    def test_max_terms_budget(self):
        ctl = MLSeriesControl(abs_tol=1e-14, max_terms=3)
        with pytest.raises(NonConvergenceError):
            mittag_leffler(0.5, -4.0, ctl)

    def test_control_validation(self):
        with pytest.raises(DomainError):
            MLSeriesControl(abs_tol=0.0)
        with pytest.raises(DomainError):
            MLSeriesControl(max_terms=0)


class TestGeneralizedMittagLeffler:
    def test_first_term_only(self):
        assert gen_mittag_leffler(0.6, 0.6, 1.0, 0.0) == pytest.approx(
            1.0 / math.gamma(0.6), rel=1e-14
        )

    def test_exponential_case(self):
        assert gen_mittag_leffler(1.0, 1.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-13)

    def test_extended_precision_goldens(self):
        for alpha, beta, gamma, z, ref in GML_GOLDENS:
            assert gen_mittag_leffler(alpha, beta, gamma, z) == pytest.approx(
                ref, rel=1e-9
            ), (alpha, beta, gamma, z)

    def test_erlang_arrival_reduction(self):
        # at alpha=1 the m-th arrival kernel collapses to the Erlang density:
        # L^m_{1,m}(x) = e^x / (m-1)!
        for m in (1, 2, 5):
            for x in (-2.0, -0.5, 1.0):
                assert gen_mittag_leffler(1.0, float(m), float(m), x) == pytest.approx(
                    math.exp(x) / math.factorial(m - 1), rel=1e-12
                )

    def test_domain_errors(self):
        for bad in ((0.0, 1.0, 1.0), (1.0, 0.0, 1.0), (1.0, 1.0, -2.0)):
            with pytest.raises(DomainError):
                gen_mittag_leffler(*bad, 0.5)


class TestIncompleteBeta:
    def test_unit_integrand(self):
        assert incomplete_beta(1.0, 1.0, 0.37) == pytest.approx(0.37, rel=1e-14)

    def test_complete_beta_identity(self):
        ref = math.gamma(0.6) * math.gamma(1.6) / math.gamma(2.2)
        assert incomplete_beta(0.6, 1.6, 1.0) == pytest.approx(ref, rel=1e-13)

    def test_quadrature_goldens(self):
        for a, b, x, ref in INCBETA_GOLDENS:
            assert incomplete_beta(a, b, x) == pytest.approx(ref, rel=1e-9), (a, b, x)

    def test_monotone_and_bounded(self):
        xs = np.linspace(0.0, 1.0, 33)
        vals = incomplete_beta(0.6, 1.6, xs)
        assert np.all(np.diff(vals) >= 0.0)
        assert vals[-1] == max(vals)
        assert np.all(vals <= incomplete_beta(0.6, 1.6, 1.0) + 1e-15)

    def test_vectorized(self):
        xs = np.array([0.1, 0.5, 0.9])
        out = incomplete_beta(2.5, 3.0, xs)
        assert out.shape == xs.shape

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            incomplete_beta(-1.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            incomplete_beta(1.0, 0.0, 0.5)
        with pytest.raises(DomainError):
            incomplete_beta(1.0, 1.0, 1.5)


class TestBesselK:
    def test_half_integer_closed_form(self):
        ref = math.sqrt(math.pi / 4.0) * math.exp(-2.0)
        assert bessel_k(0.5, 2.0) == pytest.approx(ref, rel=1e-12)

    def test_order_symmetry(self):
        assert bessel_k(-0.5, 2.0) == bessel_k(0.5, 2.0)
        assert bessel_k(-1.3, 3.0) == pytest.approx(bessel_k(1.3, 3.0), rel=1e-14)

    def test_large_argument_expansion(self):
        # truncated large-z form: sqrt(pi/2) z^(-1/2) e^(-z) (1 + (mu-1)/(8z)
        # + (mu-1)(mu-9)/(2 (8z)^2) + (mu-1)(mu-9)(mu-25)/(6 (8z)^3)), mu = 4 nu^2
        nu, z = 1.3, 50.0
        mu = 4.0 * nu * nu
        series = (
            1.0
            + (mu - 1.0) / (8.0 * z)
            + (mu - 1.0) * (mu - 9.0) / (2.0 * (8.0 * z) ** 2)
            + (mu - 1.0) * (mu - 9.0) * (mu - 25.0) / (6.0 * (8.0 * z) ** 3)
        )
        ref = math.sqrt(math.pi / 2.0) * z**-0.5 * math.exp(-z) * series
        assert bessel_k(nu, z) == pytest.approx(ref, rel=1e-6)

    def test_integral_representation_goldens(self):
        for nu, z, ref in BESSELK_GOLDENS:
            assert bessel_k(nu, z) == pytest.approx(ref, rel=1e-9), (nu, z)

    def test_scaled_variant(self):
        assert bessel_k_scaled(0.7, 3.0) == pytest.approx(
            math.exp(3.0) * bessel_k(0.7, 3.0), rel=1e-12
        )

    def test_domain_error(self):
        with pytest.raises(DomainError):
            bessel_k(0.5, 0.0)
        with pytest.raises(DomainError):
            bessel_k(0.5, -1.0)


class TestLogGamma:
    def test_known_values(self):
        assert log_gamma(1.0) == 0.0
        assert log_gamma(2.0) == 0.0
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-13)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            log_gamma(0.0)
        with pytest.raises(DomainError):
            log_gamma(-3.0)
