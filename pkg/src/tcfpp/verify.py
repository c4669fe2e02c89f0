"""Verification suites: each suite re-checks a family of distributional laws
by pitting samplers against analytic oracles (or two independent estimators
against each other) at fixed seeds and desk-scale replication counts.

Every check reports a stable record {name, claim, observed, threshold, pass};
suites are deterministic functions of their master seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .fpp import FppParams, batch_counts, fpp_bivariate_pmf, fpp_covariance, fpp_mean, fpp_pmf, fpp_variance
from .inverse import (
    InverseStepControl,
    asymptotic_moment,
    first_exit_values,
    inverse_moment_mc,
    inverse_stable_exact,
)
from .processes import (
    Tcfpp1Spec,
    Tcfpp2Spec,
    dispersion_index,
    lil_limit,
    lil_normalizer,
    poisson_time_changed_counts,
    tcfpp1_counts,
    tcfpp1_moments,
    tcfpp1_pmf,
    tcfpp2_counts,
)
from .rng import RngStream
from .specfun import mittag_leffler
from .stats import estimate_covariance, estimate_moment, fit_log_slope, ks_two_sample
from .subordinators import Composed, Gamma, InverseGaussian, Stable, TemperedStable

# worked example processes used throughout the verification suites
FNBP = Tcfpp1Spec(fpp=FppParams(lam=1.5, beta=0.6), sub=Gamma(alpha=3.0, p=4.0))
FPP_TSS = Tcfpp1Spec(fpp=FppParams(lam=1.5, beta=0.6), sub=TemperedStable(mu=2.0, alpha=0.5))
FPP_IGN = Tcfpp1Spec(fpp=FppParams(lam=1.5, beta=0.6), sub=InverseGaussian(delta=1.0, gamma=1.0))

DEFAULT_SEED = 0xD1CE


@dataclass
class CheckResult:
    """One verified claim with its observed statistic and pass/fail."""

    name: str
    claim: str
    observed: Any
    threshold: str
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "claim": self.claim,
            "observed": self.observed,
            "threshold": self.threshold,
            "pass": self.passed,
        }


def suite_reductions(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """At index beta = 1 every formula must collapse to the Poisson process."""
    checks = []
    params = FppParams(lam=1.5, beta=1.0)
    t = 2.0
    lam_t = params.lam * t
    worst = 0.0
    for n in range(31):
        poisson = math.exp(-lam_t + n * math.log(lam_t) - math.lgamma(n + 1.0))
        worst = max(worst, abs(fpp_pmf(params, n, t) - poisson))
    checks.append(
        CheckResult(
            name="poisson_pmf_reduction",
            claim="at beta=1 the counting pmf equals the Poisson pmf",
            observed=worst,
            threshold="max |diff| < 1e-12 over n <= 30",
            passed=worst < 1e-12,
        )
    )
    worst = 0.0
    for tt in (0.5, 1.0, 2.7):
        worst = max(worst, abs(fpp_mean(params, tt) - params.lam * tt))
        worst = max(worst, abs(fpp_variance(params, tt) - params.lam * tt))
    checks.append(
        CheckResult(
            name="poisson_mean_variance",
            claim="at beta=1 mean and variance both equal lam*t",
            observed=worst,
            threshold="max |diff| < 1e-10",
            passed=worst < 1e-10,
        )
    )
    worst = 0.0
    for s, tt in ((0.5, 1.0), (1.0, 3.0), (2.0, 2.0)):
        worst = max(worst, abs(fpp_covariance(params, s, tt) - params.lam * min(s, tt)))
    checks.append(
        CheckResult(
            name="poisson_covariance",
            claim="at beta=1 the covariance equals lam*min(s,t)",
            observed=worst,
            threshold="max |diff| < 1e-10",
            passed=worst < 1e-10,
        )
    )
    return checks


def suite_normalization(seed: int = DEFAULT_SEED, tol: float = 1e-6, n_cap: int = 200) -> list[CheckResult]:
    """Truncated pmf sums must reach 1 - tol at an adaptive cutoff."""
    checks = []
    for beta, lam in ((0.6, 1.5), (0.9, 2.0)):
        params = FppParams(lam=lam, beta=beta)
        cum, n = 0.0, 0
        while cum < 1.0 - tol and n <= n_cap:
            cum += fpp_pmf(params, n, 1.0)
            n += 1
        checks.append(
            CheckResult(
                name=f"fpp_normalization_beta_{beta}",
                claim="the fractional Poisson pmf sums to one",
                observed={"cumulative": cum, "n_terms": n},
                threshold=f"sum >= 1 - {tol}",
                passed=cum >= 1.0 - tol,
            )
        )
    cum, n = 0.0, 0
    while cum < 1.0 - tol and n <= n_cap:
        cum += tcfpp1_pmf(FNBP, n, 1.0)
        n += 1
    checks.append(
        CheckResult(
            name="gamma_mixture_normalization",
            claim="the gamma-subordinated pmf sums to one",
            observed={"cumulative": cum, "n_terms": n},
            threshold=f"sum >= 1 - {tol}",
            passed=cum >= 1.0 - tol,
        )
    )
    return checks


def _empirical_summary(counts: np.ndarray):
    """Empirical mean/var at the last column and cov across the two columns."""
    x, y = counts[:, 0].astype(float), counts[:, 1].astype(float)
    n = x.size
    mean = estimate_moment(y, 1.0)
    dy = y - y.mean()
    var_hat = float(np.dot(dy, dy) / (n - 1))
    w = dy * dy
    var_se = float(w.std(ddof=1) / math.sqrt(n))
    cov = estimate_covariance(x, y)
    return mean, (var_hat, var_se), cov


def _moment_agreement_checks(spec: Tcfpp1Spec, label: str, n_paths: int, s: float, t: float, stream: RngStream):
    theory = tcfpp1_moments(spec, s, t, rng=stream.substream(1), n_pairs=20_000)
    counts = tcfpp1_counts(spec, [s, t], n_paths, stream.substream(2))
    mean, (var_hat, var_se), cov = _empirical_summary(counts)
    checks = []
    z_mean = abs(mean.value - theory.mean) / math.hypot(mean.std_error, theory.mean_se)
    checks.append(
        CheckResult(
            name=f"{label}_mean",
            claim="sampled mean matches the conditional-moment formula",
            observed={"mc": mean.value, "formula": theory.mean, "z": z_mean},
            threshold="|z| < 4",
            passed=z_mean < 4.0,
        )
    )
    z_var = abs(var_hat - theory.variance) / math.hypot(var_se, theory.variance_se)
    checks.append(
        CheckResult(
            name=f"{label}_variance",
            claim="sampled variance matches the conditional-moment formula",
            observed={"mc": var_hat, "formula": theory.variance, "z": z_var},
            threshold="|z| < 4",
            passed=z_var < 4.0,
        )
    )
    z_cov = abs(cov.value - theory.covariance) / math.hypot(cov.std_error, theory.covariance_se)
    checks.append(
        CheckResult(
            name=f"{label}_covariance",
            claim="sampled covariance matches the four-term covariance formula",
            observed={"mc": cov.value, "formula": theory.covariance, "z": z_cov},
            threshold="|z| < 4",
            passed=z_cov < 4.0,
        )
    )
    return checks


def suite_moments(
    seed: int = DEFAULT_SEED,
    n_paths: int = 100_000,
    n_inverse_large: int = 10_000,
    n_inverse_small: int = 2_000,
) -> list[CheckResult]:
    """Monte Carlo vs formula moments, and inverse-clock asymptotics."""
    stream = RngStream(seed)
    checks = _moment_agreement_checks(FNBP, "gamma_clock", n_paths, 1.0, 2.0, stream.substream(10))
    checks += _moment_agreement_checks(FPP_IGN, "ig_clock", n_paths, 1.0, 2.0, stream.substream(20))

    cases = [
        ("inverse_gamma_large_t", Gamma(alpha=3.0, p=4.0), "large_t", 50.0, n_inverse_large),
        ("inverse_tss_large_t", TemperedStable(mu=2.0, alpha=0.5), "large_t", 50.0, n_inverse_large // 2),
        ("inverse_tss_small_t", TemperedStable(mu=2.0, alpha=0.5), "small_t", 0.01, n_inverse_small),
        ("inverse_ig_large_t", InverseGaussian(delta=1.0, gamma=1.0), "large_t", 50.0, n_inverse_large),
        ("inverse_ig_small_t", InverseGaussian(delta=1.0, gamma=1.0), "small_t", 0.01, n_inverse_small),
    ]
    rho = 0.6
    for i, (name, sub, regime, t, n) in enumerate(cases):
        ctrl = InverseStepControl.for_horizon(t)
        est = inverse_moment_mc(sub, rho, t, n, ctrl, stream.substream(30 + i))
        ref = asymptotic_moment(sub, rho, t, regime)
        rel = abs(est.value - ref) / ref
        checks.append(
            CheckResult(
                name=name,
                claim="first-exit moments approach the printed asymptotics",
                observed={"mc": est.value, "asymptotic": ref, "rel_err": rel},
                threshold="relative error < 15%",
                passed=rel < 0.15,
            )
        )
    return checks


def suite_dispersion(seed: int = DEFAULT_SEED, n_mc: int = 20_000) -> list[CheckResult]:
    """Overdispersion of all three worked subordinator-clock processes."""
    stream = RngStream(seed)
    checks = []
    for label, spec, method in (
        ("gamma_clock", FNBP, "analytic"),
        ("tss_clock", FPP_TSS, "monte_carlo"),
        ("ig_clock", FPP_IGN, "analytic"),
    ):
        values = {}
        ok = True
        for i, t in enumerate((0.5, 1.0, 2.0, 5.0)):
            idx = dispersion_index(
                spec, t, moment_method=method, n=n_mc, rng=stream.substream(hash((label, i)) % 2**32)
            )
            values[t] = idx
            ok = ok and idx > 1.0
        checks.append(
            CheckResult(
                name=f"overdispersion_{label}",
                claim="variance exceeds the mean at every sampled time",
                observed=values,
                threshold="index > 1 at t in {0.5, 1, 2, 5}",
                passed=ok,
            )
        )
    return checks


def suite_composition(
    seed: int = DEFAULT_SEED, n_seeds: int = 100, n: int = 5000, min_pass: int = 98
) -> list[CheckResult]:
    """Inverse-clock composition law, calibrated over many independent seeds.

    Side one: exact inverse stable clock read at first-exit values of the base
    subordinator.  Side two: first-exit of the composed descriptor (f(.))^beta
    via the stepping sampler.  The two must be KS-indistinguishable.
    """
    beta = 0.6
    base = InverseGaussian(delta=1.0, gamma=1.0)
    composed = Composed(outer=Stable(beta), inner=base)
    delta = 1.0 / 2000.0
    n_passed = 0
    p_values = []
    for k in range(n_seeds):
        gen = RngStream(seed, k).generator()
        r = first_exit_values(base, np.full(n, 1.0), delta, gen)
        side_a = inverse_stable_exact(beta, r, gen)
        side_b = first_exit_values(composed, np.full(n, 1.0), delta, gen)
        res = ks_two_sample(side_a, side_b)
        p_values.append(res["p_value"])
        if res["p_value"] > 0.01:
            n_passed += 1
    return [
        CheckResult(
            name="inverse_composition_law",
            claim="composing inverse clocks matches the inverse of the composed exponent",
            observed={"n_passed": n_passed, "n_seeds": n_seeds, "min_p": min(p_values)},
            threshold=f"KS p > 0.01 in >= {min_pass}/{n_seeds} seeds",
            passed=n_passed >= min_pass,
        )
    ]


def suite_renewal(seed: int = DEFAULT_SEED, n_paths: int = 10_000) -> list[CheckResult]:
    """Waiting-time law of the inverse-clock process against the closed form."""
    beta, alpha, lam, horizon = 0.7, 0.8, 1.0, 20.0
    spec = Tcfpp2Spec(
        fpp=FppParams(lam=lam, beta=beta),
        sub=Stable(alpha),
        ctrl=InverseStepControl.for_horizon(horizon),
    )
    grid = np.linspace(0.0, horizon, 201)[1:]
    counts = tcfpp2_counts(spec, grid, n_paths, RngStream(seed, 7))
    survival_hat = (counts == 0).mean(axis=0)
    exponent = alpha * beta
    survival_exact = np.array([mittag_leffler(exponent, -lam * t**exponent) for t in grid])
    sup_dist = float(np.max(np.abs(survival_hat - survival_exact)))
    return [
        CheckResult(
            name="first_jump_survival",
            claim="the first jump time has the Mittag-Leffler survival of the composed index",
            observed={"sup_distance": sup_dist, "n_paths": n_paths},
            threshold="sup distance < 0.02",
            passed=sup_dist < 0.02,
        )
    ]


def suite_lrd(seed: int = DEFAULT_SEED, n_paths: int = 100_000) -> list[CheckResult]:
    """Correlation decay exponent of the gamma-clock process."""
    spec = FNBP
    beta = spec.fpp.beta
    s = 1.0
    t_grid = np.geomspace(20.0, 200.0, 9)
    counts = tcfpp1_counts(spec, np.concatenate(([s], t_grid)), n_paths, RngStream(seed, 11))
    x = counts[:, 0].astype(float)
    corrs = np.array(
        [np.corrcoef(x, counts[:, 1 + j].astype(float))[0, 1] for j in range(t_grid.size)]
    )
    fit = fit_log_slope(t_grid, corrs)
    lo, hi = -beta - 0.15, -beta + 0.15
    return [
        CheckResult(
            name="correlation_decay_exponent",
            claim="the correlation decays like a power law with the clock's growth index",
            observed={"slope": fit["slope"], "stderr": fit["stderr"], "window": [20.0, 200.0]},
            threshold=f"slope in [{lo:.2f}, {hi:.2f}]",
            passed=lo <= fit["slope"] <= hi,
        )
    ]


def suite_lil(seed: int = DEFAULT_SEED, n_seeds: int = 10, min_pass: int = 8) -> list[CheckResult]:
    """Weak iterated-logarithm check for the stable-clock Poisson process."""
    alpha, lam = 0.5, 2.0
    sub = Stable(alpha)
    limit = lil_limit(sub, lam)
    times = 2.0 ** np.arange(6, 15)
    g = np.array([lil_normalizer(sub, t) for t in times])
    n_ok = 0
    ratios = []
    for k in range(n_seeds):
        counts = poisson_time_changed_counts(lam, sub, times, RngStream(seed, 100 + k))
        running_min = float(np.min(counts / g))
        ratios.append(running_min)
        if limit / 3.0 <= running_min <= 3.0 * limit:
            n_ok += 1
    return [
        CheckResult(
            name="lil_running_minimum",
            claim="the normalized running minimum hovers at the iterated-logarithm limit",
            observed={"n_ok": n_ok, "n_seeds": n_seeds, "limit": limit, "minima": ratios},
            threshold=f"min in [limit/3, 3*limit] for >= {min_pass}/{n_seeds} seeds",
            passed=n_ok >= min_pass,
        )
    ]


def suite_bivariate(seed: int = DEFAULT_SEED, n_paths: int = 100_000) -> list[CheckResult]:
    """Two-time distributions of the fractional Poisson process."""
    checks = []
    params = FppParams(lam=1.0, beta=0.7)
    lhs = fpp_bivariate_pmf(params, 0, 0, 1.0, 2.0)
    rhs = mittag_leffler(0.7, -(2.0**0.7))
    checks.append(
        CheckResult(
            name="bivariate_zero_zero",
            claim="no events by the later time reduces to the one-time zero probability",
            observed={"bivariate": lhs, "survival": rhs},
            threshold="exact (same evaluation path)",
            passed=lhs == rhs,
        )
    )
    val = fpp_bivariate_pmf(FppParams(lam=1.0, beta=1.0), 1, 2, 1.0, 2.0, quad_tol=1e-10)
    ref = math.exp(-2.0)
    checks.append(
        CheckResult(
            name="bivariate_poisson_closed_form",
            claim="at beta=1 the two-time law is the Poisson product form",
            observed={"quadrature": val, "closed_form": ref, "abs_err": abs(val - ref)},
            threshold="|diff| < 1e-8",
            passed=abs(val - ref) < 1e-8,
        )
    )
    prob = fpp_bivariate_pmf(params, 1, 1, 1.0, 2.0)
    counts = batch_counts(params, np.broadcast_to([1.0, 2.0], (n_paths, 2)).copy(), RngStream(seed, 13))
    hits = np.logical_and(counts[:, 0] == 1, counts[:, 1] == 1)
    freq = hits.mean()
    se = math.sqrt(max(freq * (1.0 - freq), 1e-12) / n_paths)
    z = abs(freq - prob) / se
    checks.append(
        CheckResult(
            name="bivariate_vs_frequency",
            claim="quadrature of the renewal-convolution form matches path frequencies",
            observed={"quadrature": prob, "mc": freq, "z": z},
            threshold="|z| < 4",
            passed=z < 4.0,
        )
    )
    return checks


SUITES = {
    "normalization": suite_normalization,
    "reductions": suite_reductions,
    "moments": suite_moments,
    "composition": suite_composition,
    "renewal": suite_renewal,
    "lrd": suite_lrd,
    "lil": suite_lil,
    "bivariate": suite_bivariate,
    "dispersion": suite_dispersion,
}


def run_suite(name: str, seed: int = DEFAULT_SEED, **sizes) -> dict:
    """Run one named suite and return its JSON-ready report."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    checks = SUITES[name](seed=seed, **sizes)
    return {
        "suite": name,
        "master_seed": seed,
        "checks": [c.to_dict() for c in checks],
        "all_pass": all(c.passed for c in checks),
    }
