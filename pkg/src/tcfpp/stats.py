"""Monte Carlo estimation and statistical testing harness.

Everything here operates on immutable sample buffers and is safe for
parallel reduction: estimates merge associatively and commutatively, so
per-stream sufficient statistics can be combined in any order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .exceptions import DomainError


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Point estimate with its standard error and replication count."""

    value: float
    std_error: float
    n: int

    def __post_init__(self) -> None:
        if self.std_error < 0:
            raise DomainError("std_error must be nonnegative")
        if self.n < 1:
            raise DomainError("n must be at least 1")

    def merge(self, other: "MonteCarloEstimate") -> "MonteCarloEstimate":
        """Pool with another estimate of the same quantity.

        Uses the pairwise update of pooled mean and M2, so merging preserves
        the mean/variance identities of the concatenated sample.
        """
        na, nb = self.n, other.n
        n = na + nb
        delta = other.value - self.value
        mean = self.value + delta * nb / n
        m2 = (
            _m2(self) + _m2(other) + delta * delta * na * nb / n
        )
        se = np.sqrt(m2 / (n - 1) / n) if n > 1 else 0.0
        return MonteCarloEstimate(value=mean, std_error=float(se), n=n)

    def interval(self, width: float = 4.0) -> tuple[float, float]:
        """value +/- width standard errors."""
        return (self.value - width * self.std_error, self.value + width * self.std_error)


def _m2(e: MonteCarloEstimate) -> float:
    # sample variance s^2 = n * se^2; M2 = s^2 * (n - 1)
    return e.std_error**2 * e.n * (e.n - 1)


@dataclass(frozen=True)
class EmpiricalPmf:
    """Observed counts of a nonnegative-integer-valued sample."""

    counts: dict[int, int]
    n: int

    def __post_init__(self) -> None:
        if any(k < 0 or v < 0 for k, v in self.counts.items()):
            raise DomainError("counts must map nonnegative ints to nonnegative ints")
        if sum(self.counts.values()) != self.n:
            raise DomainError("counts must sum to n")

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalPmf":
        samples = np.asarray(samples)
        values, freq = np.unique(samples.astype(np.int64), return_counts=True)
        return cls(counts={int(v): int(c) for v, c in zip(values, freq)}, n=int(samples.size))


def estimate_moment(samples, order: float = 1.0) -> MonteCarloEstimate:
    """Unbiased mean of samples**order with its standard error."""
    x = np.asarray(samples, dtype=float) ** order
    n = x.size
    if n < 2:
        raise DomainError("need at least 2 samples")
    se = x.std(ddof=1) / np.sqrt(n)
    return MonteCarloEstimate(value=float(x.mean()), std_error=float(se), n=n)


def estimate_covariance(x, y) -> MonteCarloEstimate:
    """Sample covariance with a moment-based (delta method) standard error."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("x and y must be 1-d arrays of equal length")
    n = x.size
    if n < 2:
        raise DomainError("need at least 2 pairs")
    dx = x - x.mean()
    dy = y - y.mean()
    cov = float(np.dot(dx, dy) / (n - 1))
    w = dx * dy
    se = float(w.std(ddof=1) / np.sqrt(n))
    return MonteCarloEstimate(value=cov, std_error=se, n=n)


def ks_two_sample(a, b) -> dict[str, float]:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic p-value."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 50 or b.size < 50:
        raise DomainError("both samples need at least 50 points")
    res = sps.ks_2samp(a, b, method="asymp")
    return {"statistic": float(res.statistic), "p_value": float(res.pvalue)}


def fit_log_slope(ts, values) -> dict[str, float]:
    """Least-squares slope of log(values) against log(ts)."""
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    if ts.size < 5:
        raise DomainError("need at least 5 points")
    if np.any(ts <= 0) or np.any(values <= 0):
        raise DomainError("ts and values must be positive for a log-log fit")
    x = np.log(ts)
    y = np.log(values)
    dx = x - x.mean()
    sxx = np.dot(dx, dx)
    slope = float(np.dot(dx, y) / sxx)
    resid = y - y.mean() - slope * dx
    dof = max(ts.size - 2, 1)
    stderr = float(np.sqrt(np.dot(resid, resid) / dof / sxx))
    return {"slope": slope, "stderr": stderr}


def chi_square_gof(empirical: EmpiricalPmf, model_pmf, tail_merge_min: int = 5) -> dict[str, float]:
    """Chi-square goodness of fit of observed counts against a model pmf.

    Cells are taken from 0 upward; once the expected count of a cell drops
    below ``tail_merge_min`` all remaining mass is merged into a single tail
    cell.  Degrees of freedom are (number of cells - 1).
    """
    n = empirical.n
    if n < 500:
        raise DomainError("need at least 500 observations")
    max_obs = max(empirical.counts) if empirical.counts else 0
    expected = []
    observed = []
    cum_prob = 0.0
    k = 0
    while True:
        p = float(model_pmf(k))
        e = n * p
        if e < tail_merge_min or k > max_obs:
            break
        expected.append(e)
        observed.append(empirical.counts.get(k, 0))
        cum_prob += p
        k += 1
    tail_expected = n * max(1.0 - cum_prob, 0.0)
    tail_observed = n - sum(observed)
    if tail_expected >= tail_merge_min:
        expected.append(tail_expected)
        observed.append(tail_observed)
    elif expected:
        # fold a thin tail into the last regular cell
        expected[-1] += tail_expected
        observed[-1] += tail_observed
    else:
        raise DomainError("model pmf leaves no usable cells")
    expected = np.asarray(expected)
    observed = np.asarray(observed, dtype=float)
    statistic = float(np.sum((observed - expected) ** 2 / expected))
    dof = len(expected) - 1
    if dof == 0:
        p_value = 1.0 if statistic < 1e-12 else 0.0
    else:
        p_value = float(sps.chi2.sf(statistic, dof))
    return {"statistic": statistic, "p_value": p_value, "dof": dof}
