"""Fractional Poisson processes on subordinator and inverse-subordinator
clocks: exact-distribution samplers paired with analytic pmf and moment
oracles, plus the Monte Carlo harness that checks one against the other.
"""

from .exceptions import (
    DomainError,
    NoisyMomentError,
    NonConvergenceError,
    QuadratureError,
    RootBracketError,
    UnsupportedRegimeError,
)
from .fpp import (
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
from .inverse import (
    InverseStepControl,
    asymptotic_moment,
    compose_first_exit_values,
    compose_inverse,
    first_exit_values,
    inverse_moment_mc,
    inverse_stable_exact,
    inverse_stable_moment,
    simulate_inverse,
)
from .processes import (
    MomentSummary,
    Tcfpp1Spec,
    Tcfpp2Spec,
    bernstein_inverse,
    dispersion_index,
    lil_limit,
    lil_normalizer,
    poisson_time_changed_counts,
    tcfpp1_counts,
    tcfpp1_moments,
    tcfpp1_pmf,
    tcfpp1_simulate,
    tcfpp2_counts,
    tcfpp2_moments,
    tcfpp2_pmf,
    tcfpp2_simulate,
    waiting_time_survival,
)
from .rng import RngStream, as_generator
from .specfun import (
    MLSeriesControl,
    bessel_k,
    bessel_k_scaled,
    gen_mittag_leffler,
    incomplete_beta,
    log_gamma,
    mittag_leffler,
)
from .stats import (
    EmpiricalPmf,
    MonteCarloEstimate,
    chi_square_gof,
    estimate_covariance,
    estimate_moment,
    fit_log_slope,
    ks_two_sample,
)
from .subordinators import (
    BernsteinDescriptor,
    Composed,
    Gamma,
    InverseGaussian,
    SamplePath,
    Stable,
    TemperedStable,
    bernstein_eval,
    fractional_moment,
    sample_increment,
    sample_increments,
    simulate_path,
    standard_stable,
)

__version__ = "0.1.0"
