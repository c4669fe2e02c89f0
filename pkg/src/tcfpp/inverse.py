"""Inverse (first-exit) subordinators via the step approximation.

The inverse E_f(t) = inf{r : D_f(r) > t} is approximated on a step width
delta by counting how many full delta-steps the driving subordinator
completes before it crosses t:

    E^delta(t) = (min{n : D_f(n * delta) > t} - 1) * delta.

Trajectories are piecewise constant with jumps of exactly delta, and the
approximation error at any fixed t is at most delta.  Moments of E_f are
estimated by Monte Carlo over independent first-exit paths; the printed
small-/large-time asymptotics of the three worked families are available in
closed form for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import DomainError, NonConvergenceError, UnsupportedRegimeError
from .rng import as_generator
from .stats import MonteCarloEstimate, estimate_moment
from .subordinators import (
    BernsteinDescriptor,
    Gamma,
    InverseGaussian,
    SamplePath,
    Stable,
    TemperedStable,
    kernel_codes,
    standard_stable,
    validate_grid,
)

DEFAULT_STEPS_PER_HORIZON = 2000

_MAX_DRIVER_STEPS = 10**8


@dataclass(frozen=True)
class InverseStepControl:
    """Step width and horizon of the first-exit approximation."""

    delta: float
    horizon: float

    def __post_init__(self) -> None:
        if self.delta <= 0 or self.horizon <= 0:
            raise DomainError("delta and horizon must be positive")
        if self.delta > self.horizon / 100.0:
            raise DomainError("delta must not exceed horizon/100")

    @classmethod
    def for_horizon(cls, horizon: float) -> "InverseStepControl":
        """Default resolution: horizon / 2000."""
        return cls(delta=horizon / DEFAULT_STEPS_PER_HORIZON, horizon=horizon)


def _driver_levels(
    f: BernsteinDescriptor, target: float, delta: float, gen, block: int = 1024
) -> np.ndarray:
    """Cumulative subordinator values at delta multiples, up to and including
    the first value exceeding ``target``."""
    chunks = []
    total = 0.0
    steps = 0
    while total <= target:
        incr = f.increments(np.full(block, delta), gen)
        cs = total + np.cumsum(incr)
        chunks.append(cs)
        total = float(cs[-1])
        steps += block
        if steps > _MAX_DRIVER_STEPS:
            raise NonConvergenceError("first-exit driver exceeded the step cap")
    levels = np.concatenate(chunks)
    stop = int(np.searchsorted(levels, target, side="right"))
    return levels[: stop + 1]


def simulate_inverse(
    f: BernsteinDescriptor,
    grid,
    ctrl: InverseStepControl,
    rng,
    return_driver: bool = False,
):
    """First-exit path E_f on a grid inside [0, ctrl.horizon]."""
    grid = validate_grid(grid)
    if grid[-1] > ctrl.horizon:
        raise DomainError("grid exceeds the control horizon")
    gen = as_generator(rng)
    if grid[-1] == 0.0:
        values = np.zeros(1)
        path = SamplePath(times=grid, values=values, kind="inverse_subordinator")
        return (path, np.empty(0)) if return_driver else path
    levels = _driver_levels(f, float(grid[-1]), ctrl.delta, gen)
    steps = np.searchsorted(levels, grid, side="right")
    # first-exit duality: with n = steps[i], the driver satisfies
    # D(n*delta) <= t < D((n+1)*delta)
    assert np.all(steps < levels.size) and np.all(levels[steps] > grid)
    assert np.all((steps == 0) | (levels[np.maximum(steps - 1, 0)] <= grid))
    values = steps.astype(float) * ctrl.delta
    path = SamplePath(times=grid, values=values, kind="inverse_subordinator")
    return (path, levels) if return_driver else path


def first_exit_values(
    f: BernsteinDescriptor,
    targets,
    delta: float,
    rng,
    block: int = 512,
    engine: str = "auto",
) -> np.ndarray:
    """Independent first-exit draws E^delta(t_i), one per row of targets.

    ``targets`` is a 1-d array (one observation time per path) or an
    (n_paths, m) array of nondecreasing per-path observation times; the
    result matches the target shape.  Rows are independent replications;
    columns within a row share one driving subordinator, so joint laws
    across observation times are preserved.

    ``engine`` selects the stepping implementation: "auto" uses the jitted
    per-path kernel when the descriptor supports it, "numpy" forces the
    blockwise engine.  The two produce different (equally valid) streams
    from the same rng.
    """
    gen = as_generator(rng)
    arr = np.asarray(targets, dtype=float)
    if arr.ndim not in (1, 2):
        raise DomainError("targets must be a 1-d or 2-d array")
    squeeze = arr.ndim == 1
    if squeeze:
        arr = arr[:, None]
    if np.any(arr < 0):
        raise DomainError("observation times must be nonnegative")
    if np.any(np.diff(arr, axis=1) < 0):
        raise DomainError("per-path observation times must be nondecreasing")
    if engine not in ("auto", "numpy"):
        raise DomainError(f"unknown engine {engine!r}")
    if engine == "auto":
        codes = kernel_codes(f)
        if codes is not None and _kernels.HAVE_NUMBA:
            out = _kernels.first_exit_matrix(
                gen, arr, float(delta), *codes, _MAX_DRIVER_STEPS
            )
            return out[:, 0] if squeeze else out
    n = arr.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    level = np.zeros(n)
    # pending marks paths whose driver value `level` belongs to the step just
    # past `counts`; it crossed the previous target but may not cross later ones
    pending = np.zeros(n, dtype=bool)
    out = np.empty_like(arr)
    for j in range(arr.shape[1]):
        t = arr[:, j]
        consume = pending & (level <= t)
        counts[consume] += 1
        pending[consume] = False
        _advance_first_exit(f, t, delta, gen, counts, level, pending, block)
        out[:, j] = counts * delta
    return out[:, 0] if squeeze else out


def _advance_first_exit(f, targets, delta, gen, counts, level, pending, block):
    """Step active paths in place until each driver crosses its target.

    A path is active when it has no pending crossing step and its target is
    positive (a zero target is exact: the first step crosses almost surely).
    """
    active = np.nonzero(~pending & (targets > 0.0))[0]
    guard = _MAX_DRIVER_STEPS // block + 1
    for _ in range(guard):
        if active.size == 0:
            return
        incr = f.increments(np.full((active.size, block), delta), gen)
        cs = level[active][:, None] + np.cumsum(incr, axis=1)
        crossed = cs > targets[active][:, None]
        done = crossed[:, -1]
        first = np.argmax(crossed, axis=1)
        counts[active] += np.where(done, first, block)
        idx_done = active[done]
        level[idx_done] = cs[done, first[done]]
        pending[idx_done] = True
        idx_cont = active[~done]
        level[idx_cont] = cs[~done, -1]
        active = idx_cont
    raise NonConvergenceError("first-exit stepping exceeded the step cap")


def compose_inverse(
    outer_beta: float,
    f: BernsteinDescriptor,
    grid,
    ctrl: InverseStepControl,
    rng,
) -> SamplePath:
    """Path of an inverse stable subordinator evaluated along an E_f path.

    Distributionally equal to the first-exit process of the descriptor with
    Laplace exponent (f(s))^outer_beta.  outer_beta = 1 is the identity time
    change and returns the E_f path itself.
    """
    if not 0.0 < outer_beta <= 1.0:
        raise DomainError("outer_beta must be in (0, 1]")
    gen = as_generator(rng)
    inner = simulate_inverse(f, grid, ctrl, gen)
    if outer_beta == 1.0:
        return inner
    r = inner.values
    r_max = float(r[-1])
    if r_max == 0.0:
        return SamplePath(times=inner.times, values=np.zeros_like(r), kind="inverse_subordinator")
    delta2 = r_max / DEFAULT_STEPS_PER_HORIZON
    levels = _driver_levels(Stable(outer_beta), r_max, delta2, gen)
    values = np.searchsorted(levels, r, side="right").astype(float) * delta2
    return SamplePath(times=inner.times, values=values, kind="inverse_subordinator")


def compose_first_exit_values(
    outer_beta: float,
    f: BernsteinDescriptor,
    t: float,
    delta: float,
    rng,
    n_paths: int,
    block: int = 512,
) -> np.ndarray:
    """Independent draws of E_outer_beta(E_f(t)), one per path.

    Batch counterpart of compose_inverse for terminal values only: the inner
    first-exit values are drawn first, then each path runs its own inverse
    stable clock up to its inner value (step width scaled to the largest
    inner value, floor of delta).
    """
    gen = as_generator(rng)
    r = first_exit_values(f, np.full(n_paths, float(t)), delta, gen, block=block)
    r_max = float(r.max())
    if r_max == 0.0:
        return np.zeros(n_paths)
    delta2 = r_max / DEFAULT_STEPS_PER_HORIZON
    return first_exit_values(Stable(outer_beta), r, delta2, gen, block=block)


def inverse_moment_mc(
    f: BernsteinDescriptor,
    rho: float,
    t: float,
    n_paths: int,
    ctrl: InverseStepControl,
    rng,
) -> MonteCarloEstimate:
    """Monte Carlo estimate of E[E_f(t)^rho] over independent first-exit paths."""
    if rho <= 0:
        raise DomainError("rho must be positive")
    if n_paths < 100:
        raise DomainError("need at least 100 paths")
    if not 0.0 < t <= ctrl.horizon:
        raise DomainError("t must lie in (0, horizon]")
    values = first_exit_values(f, np.full(n_paths, float(t)), ctrl.delta, rng)
    return estimate_moment(values, rho)


def inverse_stable_exact(alpha: float, targets, rng) -> np.ndarray:
    """Exact marginal draws of the inverse stable subordinator at fixed times.

    Uses the first-exit duality E_alpha(t) <= x iff D_alpha(x) > t together
    with self-similarity: E_alpha(t) equals (t / S)^alpha in distribution,
    with S one standard stable draw.  One draw per target, no step bias;
    joint laws across times are NOT preserved (marginals only).
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must be in (0, 1)")
    gen = as_generator(rng)
    targets = np.asarray(targets, dtype=float)
    if np.any(targets < 0):
        raise DomainError("times must be nonnegative")
    s = standard_stable(alpha, gen, targets.shape)
    return (targets / s) ** alpha


def inverse_stable_moment(alpha: float, rho: float, t: float) -> float:
    """Exact E[E_alpha(t)^rho] for the inverse stable subordinator.

    Gamma(1+rho) / Gamma(1+rho*alpha) * t^(rho*alpha); exact at every t, not
    just asymptotically, by term-by-term Laplace inversion of
    Gamma(1+rho)/(s^(1+rho*alpha)).
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must be in (0, 1)")
    if rho <= 0 or t <= 0:
        raise DomainError("rho and t must be positive")
    return math.exp(math.lgamma(1.0 + rho) - math.lgamma(1.0 + rho * alpha)) * t ** (
        rho * alpha
    )


def asymptotic_moment(
    f: BernsteinDescriptor, rho: float, t: float, regime: str
) -> float:
    """Leading-order E[E_f(t)^rho] in the printed small-/large-time regimes.

    Supported pairs: gamma family at large t; tempered stable and inverse
    Gaussian families in both regimes.  Anything else raises
    UnsupportedRegimeError.
    """
    if rho <= 0 or t <= 0:
        raise DomainError("rho and t must be positive")
    if regime not in ("small_t", "large_t"):
        raise DomainError(f"unknown regime {regime!r}")
    if f.drift != 0.0:
        raise UnsupportedRegimeError("no printed asymptotics for drifted exponents")
    if isinstance(f, Gamma) and regime == "large_t":
        return (t * f.alpha / f.p) ** rho
    if isinstance(f, TemperedStable):
        if regime == "small_t":
            return inverse_stable_moment(f.alpha, rho, t)
        return f.mu ** (rho * (1.0 - f.alpha)) * t**rho / f.alpha**rho
    if isinstance(f, InverseGaussian):
        if regime == "small_t":
            return (
                math.exp(math.lgamma(1.0 + rho) - math.lgamma(1.0 + rho / 2.0))
                * t ** (rho / 2.0)
                / (f.delta * math.sqrt(2.0)) ** rho
            )
        return (f.gamma / f.delta) ** rho * t**rho
    raise UnsupportedRegimeError(
        f"no printed asymptotic moment for {type(f).__name__} at {regime}"
    )
