"""Fractional Poisson processes run on subordinator and inverse-subordinator
clocks: simulation, pmfs, moments, dispersion, waiting times, and the law of
iterated logarithm normalizer.

Version one evaluates the counting process at an independent subordinator
D_f(t); version two at the first-exit time E_f(t).  Their pmfs share one
alternating series whose k-th term carries the fractional moment of order
beta*(n+k) of the random clock: closed forms exist for the gamma and inverse
Gaussian families, Monte Carlo provides the rest, and the series converges
only while lam times the clock's per-order moment growth stays below one --
outside that region the operations raise NonConvergenceError rather than
return garbage.

All Monte Carlo entry points accept either an RngStream or a live Generator
and vectorize across replications.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .exceptions import (
    DomainError,
    NoisyMomentError,
    NonConvergenceError,
    RootBracketError,
    UnsupportedRegimeError,
)
from .fpp import FppParams, batch_counts, fpp_simulate
from .inverse import InverseStepControl, compose_first_exit_values, first_exit_values, simulate_inverse
from .rng import as_generator
from .specfun import DEFAULT_CONTROL, MLSeriesControl, incomplete_beta
from .stats import MonteCarloEstimate, estimate_moment
from .subordinators import (
    BernsteinDescriptor,
    Composed,
    Gamma,
    InverseGaussian,
    SamplePath,
    Stable,
    sample_increments,
    simulate_path,
    validate_grid,
)


@dataclass(frozen=True)
class Tcfpp1Spec:
    """Counting process on a subordinator clock."""

    fpp: FppParams
    sub: BernsteinDescriptor


@dataclass(frozen=True)
class Tcfpp2Spec:
    """Counting process on an inverse-subordinator clock."""

    fpp: FppParams
    sub: BernsteinDescriptor
    ctrl: InverseStepControl

    @property
    def renewal_exponent(self) -> BernsteinDescriptor:
        """Descriptor with Laplace exponent (f(s))^beta.

        The process is a renewal process driven by the inverse subordinator
        of this exponent; beta = 1 degenerates to the clock itself.
        """
        if self.fpp.beta == 1.0:
            return self.sub
        return Composed(outer=Stable(self.fpp.beta), inner=self.sub)


@dataclass(frozen=True)
class MomentSummary:
    """Mean/variance at t and covariance at (s, t), with standard errors.

    Standard errors are zero for analytically available pieces; the
    covariance always carries Monte Carlo error from its mixed term.
    """

    mean: float
    variance: float
    covariance: float
    mean_se: float = 0.0
    variance_se: float = 0.0
    covariance_se: float = 0.0


# ---------------------------------------------------------------------------
# simulation


def tcfpp1_simulate(spec: Tcfpp1Spec, grid, rng) -> SamplePath:
    """One path: subordinator values at the grid, then event counts there."""
    grid = validate_grid(grid)
    gen = as_generator(rng)
    clock = simulate_path(spec.sub, grid, gen)
    values = _counts_at(spec.fpp, clock.values, gen)
    return SamplePath(times=grid, values=values, kind="counting")


def tcfpp2_simulate(spec: Tcfpp2Spec, grid, rng) -> SamplePath:
    """One path: first-exit values at the grid, then event counts there."""
    grid = validate_grid(grid)
    gen = as_generator(rng)
    clock = simulate_inverse(spec.sub, grid, spec.ctrl, gen)
    values = _counts_at(spec.fpp, clock.values, gen)
    return SamplePath(times=grid, values=values, kind="counting")


def _counts_at(params: FppParams, internal_times: np.ndarray, gen) -> np.ndarray:
    horizon = float(internal_times[-1])
    if horizon == 0.0:
        return np.zeros_like(internal_times)
    events = fpp_simulate(params, horizon, gen).events
    return np.searchsorted(events, internal_times, side="right").astype(float)


def tcfpp1_counts(spec: Tcfpp1Spec, times, n_paths: int, rng) -> np.ndarray:
    """Replicated counts at fixed observation times, shape (n_paths, m).

    Vectorized across paths: one subordinator clock and one event stream per
    replication, observed jointly at all times.
    """
    gen = as_generator(rng)
    times = np.asarray(times, dtype=float)
    gaps = np.diff(np.concatenate(([0.0], times)))
    if np.any(gaps <= 0):
        raise DomainError("observation times must be strictly increasing and positive")
    incr = sample_increments(spec.sub, gaps, gen, size=(n_paths, gaps.size))
    internal = np.cumsum(incr, axis=1)
    return batch_counts(spec.fpp, internal, gen)


def tcfpp2_counts(spec: Tcfpp2Spec, times, n_paths: int, rng) -> np.ndarray:
    """Replicated counts of the inverse-clock process at fixed times."""
    gen = as_generator(rng)
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) <= 0) or np.any(times <= 0):
        raise DomainError("observation times must be strictly increasing and positive")
    if times[-1] > spec.ctrl.horizon:
        raise DomainError("observation times exceed the control horizon")
    targets = np.broadcast_to(times, (n_paths, times.size)).copy()
    internal = first_exit_values(spec.sub, targets, spec.ctrl.delta, gen)
    return batch_counts(spec.fpp, internal, gen)


# ---------------------------------------------------------------------------
# log-space moment providers for the pmf series


def _log_analytic_moment(f: BernsteinDescriptor, r: float, t: float) -> float:
    """log E[D_f(t)^r] for the families with printed closed forms."""
    if r == 0.0:
        return 0.0
    if f.drift != 0.0:
        raise DomainError("analytic moments require zero drift")
    if isinstance(f, Gamma):
        pt = f.p * t
        return math.lgamma(pt + r) - math.lgamma(pt) - r * math.log(f.alpha)
    if isinstance(f, InverseGaussian):
        from .specfun import bessel_k_scaled

        z = f.delta * f.gamma * t
        kve = bessel_k_scaled(r - 0.5, z)
        if not np.isfinite(kve) or kve <= 0.0:
            return math.inf
        return (
            0.5 * math.log(2.0 / math.pi)
            + math.log(f.delta)
            + (r - 0.5) * math.log(f.delta / f.gamma)
            + (r + 0.5) * math.log(t)
            + math.log(kve)
        )
    raise DomainError(
        f"no analytic moment sequence for {type(f).__name__}; use monte_carlo"
    )


class _LogMomentSample:
    """Log-space moment estimates of a fixed positive sample.

    Supplies log E-hat[X^r] and the log standard error of that estimate for
    any order r, reusing one draw of the random clock for every series term.
    """

    def __init__(self, draws: np.ndarray):
        draws = np.asarray(draws, dtype=float)
        self.n = draws.size
        with np.errstate(divide="ignore"):
            self._logs = np.where(draws > 0.0, np.log(np.maximum(draws, 1e-300)), -np.inf)
        self._log_n = math.log(self.n)

    def log_moment(self, r: float) -> tuple[float, float]:
        if r == 0.0:
            return 0.0, -math.inf
        log_m = float(logsumexp(r * self._logs)) - self._log_n
        log_m2 = float(logsumexp(2.0 * r * self._logs)) - self._log_n
        if log_m == -math.inf:
            return -math.inf, -math.inf
        # var(mean) = (m2 - m^2) / n, all in logs
        gap = 2.0 * log_m - log_m2
        if gap >= 0.0:
            return log_m, -math.inf
        log_var = log_m2 + math.log1p(-math.exp(gap)) - self._log_n
        return log_m, 0.5 * log_var


# peak-to-result ratio beyond which the float64 alternating sum has lost too
# many digits to trust; analytic series are then redone in high precision
_CANCEL_RATIO = 1e6


def _pmf_series(
    params: FppParams,
    n: int,
    log_moment,
    control: MLSeriesControl,
    n_mc: int | None = None,
    exact_refine=None,
):
    """Alternating pmf series with a pluggable log-moment provider.

    Returns (value, std_error).  The provider maps an order r to
    (log moment, log se); se of -inf marks exact moments.  Noisy tail terms
    are folded into the error budget when they are already below it,
    otherwise NoisyMomentError is raised.  A sum whose terms peaked more than
    _CANCEL_RATIO above the result is cancellation-corrupted in double
    precision; it is recomputed by ``exact_refine`` when one is supplied and
    rejected otherwise.
    """
    lam, beta = params.lam, params.beta
    log_lam = math.log(lam)
    log_pref = n * log_lam - math.lgamma(n + 1.0)
    total = 0.0
    comp = 0.0
    var_acc = 0.0
    prev_mag = math.inf
    log_peak = -math.inf
    for k in range(control.max_terms):
        r = beta * (n + k)
        log_m, log_se = log_moment(r)
        log_w = (
            math.lgamma(n + k + 1.0)
            - math.lgamma(k + 1.0)
            + k * log_lam
            - math.lgamma(r + 1.0)
            + log_pref
        )
        log_term = log_w + log_m
        if log_term > 700.0:
            raise NonConvergenceError(
                "pmf series term overflows double precision; the series "
                "diverges for these parameters (lam too large for this clock)"
            )
        mag = math.exp(log_term)
        log_peak = max(log_peak, log_term)
        se_term = math.exp(log_w + log_se) if log_se > -math.inf else 0.0
        noisy = log_se > math.log(0.1) + log_m
        if noisy and n_mc is not None:
            floor = max(control.abs_tol * (1.0 + abs(total)), math.sqrt(var_acc))
            if mag < floor and mag < prev_mag:
                # truncate: the remaining alternating tail is bounded by this
                # term, absorb it into the reported error
                return total, math.sqrt(var_acc + se_term**2) + mag
            raise NoisyMomentError(
                f"moment of order {r:.3f} has relative SE above 10% but its "
                "series term still matters; increase n_paths"
            )
        sign = -1.0 if k % 2 else 1.0
        y = sign * mag - comp
        t_new = total + y
        comp = (t_new - total) - y
        total = t_new
        var_acc += se_term**2
        if mag < control.abs_tol * (1.0 + abs(total)) and mag < prev_mag:
            if math.exp(log_peak) > _CANCEL_RATIO * max(abs(total), 5e-324):
                if exact_refine is not None:
                    return exact_refine(log_peak), 0.0
                raise NonConvergenceError(
                    "alternating pmf series is cancellation-corrupted in "
                    "double precision and no exact refinement is available"
                )
            return total, math.sqrt(var_acc)
        prev_mag = mag
    raise NonConvergenceError(
        f"pmf series did not converge within {control.max_terms} terms"
    )


def _mp_refine_pmf(spec: Tcfpp1Spec, n: int, t: float):
    """High-precision fallback for the analytic-moment pmf series."""

    def refine(log_peak: float) -> float:
        import mpmath as mp

        digits_lost = max(int(log_peak / math.log(10.0)) + 10, 0)
        with mp.workdps(30 + digits_lost):
            lam = mp.mpf(params_lam)
            beta = mp.mpf(params_beta)
            tt = mp.mpf(t)
            total = mp.mpf(0)
            prev = mp.inf
            for k in range(20000):
                r = beta * (n + k)
                term = (
                    mp.factorial(n + k)
                    / mp.factorial(k)
                    * (-lam) ** k
                    / mp.gamma(r + 1)
                    * _mp_clock_moment(spec.sub, r, tt, mp)
                )
                total += term
                mag = abs(term)
                if mag < mp.mpf("1e-30") * (1 + abs(total)) and mag < prev and k > 4:
                    break
                prev = mag
            else:
                raise NonConvergenceError("high-precision pmf series did not converge")
            value = lam**n / mp.factorial(n) * total
            return min(max(float(value), 0.0), 1.0)

    params_lam, params_beta = spec.fpp.lam, spec.fpp.beta
    return refine


def _mp_clock_moment(f: BernsteinDescriptor, r, t, mp):
    """E[D_f(t)^r] in mpmath arithmetic for the analytic families."""
    if isinstance(f, Gamma):
        pt = mp.mpf(f.p) * t
        return mp.gamma(pt + r) / (mp.gamma(pt) * mp.mpf(f.alpha) ** r)
    if isinstance(f, InverseGaussian):
        z = mp.mpf(f.delta) * mp.mpf(f.gamma) * t
        return (
            mp.sqrt(2 / mp.pi)
            * mp.mpf(f.delta)
            * (mp.mpf(f.delta) / mp.mpf(f.gamma)) ** (r - mp.mpf("0.5"))
            * t ** (r + mp.mpf("0.5"))
            * mp.exp(z)
            * mp.besselk(r - mp.mpf("0.5"), z)
        )
    raise DomainError(f"no exact moment refinement for {type(f).__name__}")


def tcfpp1_pmf(
    spec: Tcfpp1Spec,
    n: int,
    t: float,
    moment_method: str = "analytic",
    mc_paths: int = 100_000,
    rng=None,
    control: MLSeriesControl = DEFAULT_CONTROL,
) -> float:
    """P[process = n at time t] for the subordinator-clock version."""
    if n < 0 or n != int(n):
        raise DomainError("n must be a nonnegative integer")
    if t <= 0:
        raise DomainError("t must be positive")
    if moment_method == "analytic":
        provider = lambda r: (_log_analytic_moment(spec.sub, r, t), -math.inf)
        value, _ = _pmf_series(
            spec.fpp, int(n), provider, control, exact_refine=_mp_refine_pmf(spec, int(n), t)
        )
        return min(max(value, 0.0), 1.0)
    if moment_method == "monte_carlo":
        if rng is None:
            raise DomainError("monte_carlo moments need an rng")
        draws = sample_increments(spec.sub, t, rng, size=mc_paths)
        sample = _LogMomentSample(draws)
        value, _ = _pmf_series(spec.fpp, int(n), sample.log_moment, control, n_mc=mc_paths)
        return min(max(value, 0.0), 1.0)
    raise DomainError(f"unknown moment_method {moment_method!r}")


def tcfpp2_pmf(
    spec: Tcfpp2Spec,
    n: int,
    t: float,
    n_paths: int = 10_000,
    rng=None,
    control: MLSeriesControl = DEFAULT_CONTROL,
) -> MonteCarloEstimate:
    """Monte Carlo pmf of the inverse-clock version, with propagated error.

    Fractional moments of the first-exit clock are estimated from one batch
    of paths and pushed through the series; per-term errors are treated as
    independent and summed in quadrature.
    """
    if n < 0 or n != int(n):
        raise DomainError("n must be a nonnegative integer")
    if not 0.0 < t <= spec.ctrl.horizon:
        raise DomainError("t must lie in (0, horizon]")
    if rng is None:
        raise DomainError("tcfpp2_pmf needs an rng")
    if n_paths < 100:
        raise DomainError("need at least 100 paths")
    gen = as_generator(rng)
    draws = first_exit_values(spec.sub, np.full(n_paths, float(t)), spec.ctrl.delta, gen)
    sample = _LogMomentSample(draws)
    value, se = _pmf_series(spec.fpp, int(n), sample.log_moment, control, n_mc=n_paths)
    return MonteCarloEstimate(value=value, std_error=se, n=n_paths)


# ---------------------------------------------------------------------------
# moments, dispersion


def _clock_moments(
    sub: BernsteinDescriptor,
    beta: float,
    t: float,
    moment_method: str,
    n: int,
    gen,
) -> tuple[float, float, float, float]:
    """(M_beta, M_2beta, se_beta, se_2beta) for the subordinator clock at t."""
    if moment_method == "analytic":
        from .subordinators import fractional_moment

        return (
            float(fractional_moment(sub, beta, t)),
            float(fractional_moment(sub, 2.0 * beta, t)),
            0.0,
            0.0,
        )
    if moment_method == "monte_carlo":
        draws = sample_increments(sub, t, gen, size=n)
        m1 = estimate_moment(draws, beta)
        m2 = estimate_moment(draws, 2.0 * beta)
        return m1.value, m2.value, m1.std_error, m2.std_error
    raise DomainError(f"unknown moment_method {moment_method!r}")


def tcfpp1_moments(
    spec: Tcfpp1Spec,
    s: float,
    t: float,
    moment_method: str = "analytic",
    n_pairs: int = 10_000,
    rng=None,
) -> MomentSummary:
    """Mean/variance at t and covariance at (s, t) of the subordinator-clock
    process.

    The covariance's mixed expectation E[D(t)^(2 beta) * B(beta, 1+beta;
    D(s)/D(t))] has no closed form and is estimated over ``n_pairs``
    subordinator pairs, so an rng is always required.
    """
    if not 0.0 < s <= t:
        raise DomainError("require 0 < s <= t")
    if rng is None:
        raise DomainError("tcfpp1_moments needs an rng for the mixed covariance term")
    gen = as_generator(rng)
    params = spec.fpp
    beta, q, d = params.beta, params.mean_coeff, params.covariance_coeff
    mb_t, m2b_t, se_b_t, se_2b_t = _clock_moments(
        spec.sub, beta, t, moment_method, n_pairs, gen
    )
    mb_s, m2b_s, se_b_s, se_2b_s = (
        (mb_t, m2b_t, se_b_t, se_2b_t)
        if s == t
        else _clock_moments(spec.sub, beta, s, moment_method, n_pairs, gen)
    )
    mean = q * mb_t
    mean_se = q * se_b_t
    variance = q * mb_t * (1.0 - q * mb_t) + 2.0 * d * m2b_t
    variance_se = math.hypot(q * abs(1.0 - 2.0 * q * mb_t) * se_b_t, 2.0 * d * se_2b_t)

    d_s = sample_increments(spec.sub, s, gen, size=n_pairs)
    d_t = d_s if s == t else d_s + sample_increments(spec.sub, t - s, gen, size=n_pairs)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(d_t > 0.0, d_s / np.maximum(d_t, 1e-300), 0.0)
    mixed = np.where(d_t > 0.0, d_t ** (2.0 * beta) * incomplete_beta(beta, 1.0 + beta, ratio), 0.0)
    mixed_est = estimate_moment(mixed, 1.0)

    covariance = (
        q * mb_s + d * m2b_s - q**2 * mb_s * mb_t + q**2 * beta * mixed_est.value
    )
    covariance_se = math.sqrt(
        (q * se_b_s) ** 2
        + (d * se_2b_s) ** 2
        + (q**2 * mb_t * se_b_s) ** 2
        + (q**2 * mb_s * se_b_t) ** 2
        + (q**2 * beta * mixed_est.std_error) ** 2
    )
    return MomentSummary(mean, variance, covariance, mean_se, variance_se, covariance_se)


def tcfpp2_moments(
    spec: Tcfpp2Spec,
    s: float,
    t: float,
    n_paths: int = 10_000,
    rng=None,
) -> MomentSummary:
    """Monte Carlo moments of the inverse-clock process.

    The clock values at s and t come from the same first-exit paths, so the
    mixed covariance term respects the joint law.  Raises NoisyMomentError if
    any required clock moment has relative SE above 10%.
    """
    if not 0.0 < s <= t:
        raise DomainError("require 0 < s <= t")
    if t > spec.ctrl.horizon:
        raise DomainError("t exceeds the control horizon")
    if rng is None:
        raise DomainError("tcfpp2_moments needs an rng")
    if n_paths < 100:
        raise DomainError("need at least 100 paths")
    gen = as_generator(rng)
    params = spec.fpp
    beta, q, d = params.beta, params.mean_coeff, params.covariance_coeff
    targets = np.broadcast_to(np.array([s, t]), (n_paths, 2)).copy()
    vals = first_exit_values(spec.sub, targets, spec.ctrl.delta, gen)
    e_s, e_t = vals[:, 0], vals[:, 1]

    m_b_t = estimate_moment(e_t, beta)
    m_2b_t = estimate_moment(e_t, 2.0 * beta)
    m_b_s = estimate_moment(e_s, beta)
    m_2b_s = estimate_moment(e_s, 2.0 * beta)
    for est, name in ((m_b_t, "beta"), (m_2b_t, "2beta")):
        if est.value > 0 and est.std_error > 0.1 * est.value:
            raise NoisyMomentError(
                f"clock moment of order {name} has relative SE "
                f"{est.std_error / est.value:.2%}; increase n_paths"
            )

    mean = q * m_b_t.value
    mean_se = q * m_b_t.std_error
    variance = q * m_b_t.value * (1.0 - q * m_b_t.value) + 2.0 * d * m_2b_t.value
    variance_se = math.hypot(
        q * abs(1.0 - 2.0 * q * m_b_t.value) * m_b_t.std_error,
        2.0 * d * m_2b_t.std_error,
    )
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(e_t > 0.0, e_s / np.maximum(e_t, 1e-300), 0.0)
    mixed = np.where(e_t > 0.0, e_t ** (2.0 * beta) * incomplete_beta(beta, 1.0 + beta, ratio), 0.0)
    mixed_est = estimate_moment(mixed, 1.0)
    covariance = (
        q * m_b_s.value
        + d * m_2b_s.value
        - q**2 * m_b_s.value * m_b_t.value
        + q**2 * beta * mixed_est.value
    )
    covariance_se = math.sqrt(
        (q * m_b_s.std_error) ** 2
        + (d * m_2b_s.std_error) ** 2
        + (q**2 * m_b_t.value * m_b_s.std_error) ** 2
        + (q**2 * m_b_s.value * m_b_t.std_error) ** 2
        + (q**2 * beta * mixed_est.std_error) ** 2
    )
    return MomentSummary(mean, variance, covariance, mean_se, variance_se, covariance_se)


def dispersion_index(
    spec,
    t: float,
    moment_method: str = "analytic",
    n: int = 100_000,
    rng=None,
) -> float:
    """Variance-to-mean ratio at time t (> 1 means overdispersion).

    Accepts FppParams (plain fractional Poisson process), Tcfpp1Spec, or
    Tcfpp2Spec (which requires an rng).
    """
    if t <= 0:
        raise DomainError("t must be positive")
    if isinstance(spec, FppParams):
        from .fpp import fpp_mean, fpp_variance

        return fpp_variance(spec, t) / fpp_mean(spec, t)
    if isinstance(spec, Tcfpp1Spec):
        gen = as_generator(rng) if rng is not None else None
        if moment_method == "monte_carlo" and gen is None:
            raise DomainError("monte_carlo dispersion needs an rng")
        params = spec.fpp
        q, d, beta = params.mean_coeff, params.covariance_coeff, params.beta
        mb, m2b, _, _ = _clock_moments(spec.sub, beta, t, moment_method, n, gen)
        mean = q * mb
        variance = mean * (1.0 - mean) + 2.0 * d * m2b
        return variance / mean
    if isinstance(spec, Tcfpp2Spec):
        mom = tcfpp2_moments(spec, t, t, n_paths=n, rng=rng)
        return mom.variance / mom.mean
    raise DomainError(f"unsupported spec type {type(spec).__name__}")


# ---------------------------------------------------------------------------
# renewal structure


def waiting_time_survival(
    spec: Tcfpp2Spec, t: float, n_paths: int, rng
) -> MonteCarloEstimate:
    """P[waiting time > t] = E[exp(-lam * E_phi(t))], phi = (f(.))^beta.

    E_phi is simulated as the inverse stable clock run along first-exit values
    of the base subordinator, which is distributionally exact.
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    if t == 0.0:
        return MonteCarloEstimate(value=1.0, std_error=0.0, n=n_paths)
    if t > spec.ctrl.horizon:
        raise DomainError("t exceeds the control horizon")
    gen = as_generator(rng)
    vals = compose_first_exit_values(
        spec.fpp.beta, spec.sub, t, spec.ctrl.delta, gen, n_paths
    )
    return estimate_moment(np.exp(-spec.fpp.lam * vals), 1.0)


def poisson_time_changed_counts(lam: float, sub: BernsteinDescriptor, times, rng) -> np.ndarray:
    """Joint counts N(D_f(t_j)) of a Poisson process on a subordinator clock.

    Exact at arbitrarily large times: counts accumulate Poisson increments
    with means lam * (D(t_j) - D(t_{j-1})), so no event list is materialized.
    """
    if lam <= 0:
        raise DomainError("lam must be positive")
    gen = as_generator(rng)
    times = np.asarray(times, dtype=float)
    if np.any(times <= 0) or np.any(np.diff(times) <= 0):
        raise DomainError("times must be positive and strictly increasing")
    gaps = np.diff(np.concatenate(([0.0], times)))
    d_incr = sub.increments(gaps, gen)
    n_incr = gen.poisson(lam * d_incr)
    return np.cumsum(n_incr)


# ---------------------------------------------------------------------------
# law of iterated logarithm


def bernstein_inverse(f: BernsteinDescriptor, y: float, max_upper: float = 1e300) -> float:
    """Inverse of the Laplace exponent by bracketing and bisection."""
    if y < 0:
        raise DomainError("y must be nonnegative")
    if y == 0.0:
        return 0.0
    hi = 1.0
    while float(f.laplace_exponent(hi)) < y:
        hi *= 2.0
        if hi > max_upper:
            raise RootBracketError(f"could not bracket f^-1({y}) below {max_upper}")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(f.laplace_exponent(mid)) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(hi, 1.0):
            break
    return 0.5 * (lo + hi)


def lil_normalizer(f: BernsteinDescriptor, t: float) -> float:
    """g(t) = loglog(t) / f^{-1}(loglog(t) / t), defined for t > e."""
    if t <= math.e:
        raise DomainError("t must exceed e")
    y = math.log(math.log(t))
    return y / bernstein_inverse(f, y / t)


def lil_limit(f: BernsteinDescriptor, lam: float, beta: float = 1.0) -> float:
    """Almost-sure liminf of N(D_f(t)) / g(t) for the beta = 1 case.

    Only the stable family at beta = 1 has a deterministic limit,
    lam * alpha * (1 - alpha)^((1-alpha)/alpha); the fractional case has a
    random limit and is not testable from finitely many paths.
    """
    if lam <= 0:
        raise DomainError("lam must be positive")
    if beta != 1.0:
        raise UnsupportedRegimeError("only the beta = 1 limit is deterministic")
    if not isinstance(f, Stable) or f.drift != 0.0:
        raise UnsupportedRegimeError("deterministic limit requires a driftless stable exponent")
    a = f.alpha
    return lam * a * (1.0 - a) ** ((1.0 - a) / a)
