"""Special functions underlying every analytic formula in the toolkit.

The two Mittag-Leffler variants are summed directly from their defining
series.  All coefficient ratios run through ``lgamma`` in log space and the
alternating sums use compensated (Kahan) accumulation, so probability-scale
results keep their leading digits even when intermediate terms are large.
The incomplete beta, modified Bessel K, and log-gamma are thin wrappers over
scipy/math routines behind the same domain-checked surface.

All functions here are pure; they can be called concurrently from any number
of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from . import _kernels
from .exceptions import DomainError, NonConvergenceError

# Most negative Mittag-Leffler argument accepted before the alternating series
# is declared cancellation-corrupted in double precision.
ML_SERIES_Z_MIN = -35.0

# log-magnitude at which a single series term would overflow float64
_LOG_OVERFLOW = 700.0


@dataclass(frozen=True)
class MLSeriesControl:
    """Truncation control for the Mittag-Leffler series."""

    abs_tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self) -> None:
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")


DEFAULT_CONTROL = MLSeriesControl()


class _KahanSum:
    """Compensated accumulator for alternating series."""

    __slots__ = ("total", "_c")

    def __init__(self) -> None:
        self.total = 0.0
        self._c = 0.0

    def add(self, term: float) -> None:
        y = term - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t


# an alternating sum whose terms peaked this far above the result has lost
# more digits than compensated float64 summation can recover (~6 remain)
_CANCEL_RATIO = 1e10


def kahan_series_sum(log_terms, signs, control: MLSeriesControl) -> float:
    """Sum sign*exp(log_term) over an iterator with the toolkit stopping rule.

    Stops once |term| < abs_tol*(1+|sum|) AND |term| < |previous term|; the
    second condition keeps a growing alternating series from truncating before
    its peak.  Raises NonConvergenceError if max_terms is exhausted, a term
    overflows float64, or cancellation ate the result (terms peaked more than
    _CANCEL_RATIO above the sum).
    """
    acc = _KahanSum()
    prev_mag = math.inf
    log_peak = -math.inf
    for k, (log_t, sign) in enumerate(zip(log_terms, signs)):
        if log_t > _LOG_OVERFLOW:
            raise NonConvergenceError(
                "series term overflows double precision; argument outside "
                "the supported summation range"
            )
        mag = math.exp(log_t)
        log_peak = max(log_peak, log_t)
        acc.add(sign * mag)
        if mag < control.abs_tol * (1.0 + abs(acc.total)) and mag < prev_mag:
            if math.exp(log_peak) > _CANCEL_RATIO * max(abs(acc.total), 5e-324):
                raise NonConvergenceError(
                    "alternating series is cancellation-corrupted in double "
                    "precision for this argument"
                )
            return acc.total
        prev_mag = mag
        if k + 1 >= control.max_terms:
            break
    raise NonConvergenceError(
        f"series did not meet abs_tol={control.abs_tol} "
        f"within {control.max_terms} terms"
    )


def _raise_series_status(status: int, context: str) -> None:
    if status == _kernels.SERIES_OVERFLOW:
        raise NonConvergenceError(
            f"{context}: series term overflows double precision"
        )
    if status == _kernels.SERIES_MAX_TERMS:
        raise NonConvergenceError(f"{context}: series exhausted its term budget")
    if status == _kernels.SERIES_CANCELLED:
        raise NonConvergenceError(
            f"{context}: alternating series is cancellation-corrupted in "
            "double precision for this argument"
        )


def mittag_leffler(alpha: float, z: float, control: MLSeriesControl = DEFAULT_CONTROL) -> float:
    """One-parameter Mittag-Leffler function, sum of z^k / Gamma(alpha*k + 1).

    alpha must lie in (0, 1].  Arguments below ``ML_SERIES_Z_MIN`` are refused
    outright: past that point the alternating series cancels away all float64
    significance.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must be in (0, 1], got {alpha}")
    if not math.isfinite(z):
        raise DomainError("z must be finite")
    if z < ML_SERIES_Z_MIN:
        raise NonConvergenceError(
            f"z={z} below the double-precision summation range ({ML_SERIES_Z_MIN})"
        )
    if z == 0.0:
        return 1.0
    if _kernels.HAVE_NUMBA:
        value, status = _kernels.ml_series(
            alpha, z, control.abs_tol, control.max_terms, _CANCEL_RATIO
        )
        _raise_series_status(status, "mittag_leffler")
        return value
    log_az = math.log(abs(z))
    neg = z < 0.0

    def log_terms():
        k = 0
        while True:
            yield k * log_az - math.lgamma(alpha * k + 1.0)
            k += 1

    def signs():
        k = 0
        while True:
            yield -1.0 if (neg and k % 2) else 1.0
            k += 1

    return kahan_series_sum(log_terms(), signs(), control)


def gen_mittag_leffler(
    alpha: float,
    beta: float,
    gamma: float,
    z: float,
    control: MLSeriesControl = DEFAULT_CONTROL,
) -> float:
    """Three-parameter (Prabhakar) Mittag-Leffler function.

    Sum over k of Gamma(gamma+k) / (Gamma(gamma) Gamma(alpha*k+beta)) * z^k/k!
    for alpha, beta, gamma > 0.
    """
    if alpha <= 0 or beta <= 0 or gamma <= 0:
        raise DomainError("alpha, beta, gamma must all be positive")
    if not math.isfinite(z):
        raise DomainError("z must be finite")
    if z == 0.0:
        return math.exp(-math.lgamma(beta))
    if _kernels.HAVE_NUMBA:
        value, status = _kernels.gml_series(
            alpha, beta, gamma, z, control.abs_tol, control.max_terms, _CANCEL_RATIO
        )
        _raise_series_status(status, "gen_mittag_leffler")
        return value
    log_az = math.log(abs(z))
    neg = z < 0.0
    lg_gamma = math.lgamma(gamma)

    def log_terms():
        k = 0
        while True:
            yield (
                math.lgamma(gamma + k)
                - lg_gamma
                - math.lgamma(alpha * k + beta)
                - math.lgamma(k + 1.0)
                + k * log_az
            )
            k += 1

    def signs():
        k = 0
        while True:
            yield -1.0 if (neg and k % 2) else 1.0
            k += 1

    return kahan_series_sum(log_terms(), signs(), control)


def incomplete_beta(a, b, x):
    """Unnormalized incomplete beta integral of t^(a-1)(1-t)^(b-1) on [0, x].

    Vectorized over x (and over a, b when broadcastable).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(a <= 0) or np.any(b <= 0):
        raise DomainError("a and b must be positive")
    if np.any(x < 0) or np.any(x > 1):
        raise DomainError("x must lie in [0, 1]")
    out = sp.betainc(a, b, x) * np.exp(sp.betaln(a, b))
    return float(out) if out.ndim == 0 else out


def bessel_k(nu: float, z):
    """Modified Bessel function of the third kind K_nu(z), z > 0.

    Symmetric in the order: K_{-nu} = K_nu.  Vectorized over z.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("z must be positive")
    out = sp.kv(nu, z)
    return float(out) if out.ndim == 0 else out


def bessel_k_scaled(nu: float, z):
    """exp(z) * K_nu(z); avoids underflow in moment formulas at large z."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("z must be positive")
    out = sp.kve(nu, z)
    return float(out) if out.ndim == 0 else out


def log_gamma(x) -> float:
    """Natural log of Gamma(x) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("x must be positive")
    out = sp.gammaln(x)
    return float(out) if out.ndim == 0 else out
