"""Bernstein-function descriptors and exact samplers for Levy subordinators.

Four parametric families are supported (stable, gamma, tempered stable,
inverse Gaussian) plus arbitrary composition of descriptors.  Every family
carries its Laplace exponent f(s) -- the subordinator D_f satisfies
E[exp(-s D_f(t))] = exp(-t f(s)) -- and an exact sampler for increments
D_f(h):

* stable: Kanter transform of a uniform and an exponential, scaled by the
  self-similarity D(h) = h^(1/alpha) D(1);
* gamma: gamma variates G(shape = p*h, rate = alpha);
* tempered stable: thinning of untempered stable candidates with acceptance
  probability exp(-mu * x);
* inverse Gaussian: normal transform with uniform root correction;
* composition: for f = outer(inner(.)), an increment is the inner
  subordinator run for an operational time drawn from the outer one.

Strictly increasing sample paths require an infinite Levy measure; all four
built-in families satisfy this, and it is a caller obligation for exotic
compositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, NonConvergenceError
from .rng import RngStream, as_generator
from .stats import MonteCarloEstimate, estimate_moment

_TSS_MAX_TRIES = 10**6


@dataclass(frozen=True)
class BernsteinDescriptor:
    """Laplace exponent of a subordinator, plus an optional linear drift."""

    drift: float = field(default=0.0, kw_only=True)

    def __post_init__(self) -> None:
        if self.drift < 0:
            raise DomainError("drift must be nonnegative")

    def laplace_exponent(self, s):
        """f(s) = drift*s + jump part; vectorized over s >= 0."""
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise DomainError("s must be nonnegative")
        out = self.drift * s + self._jump_exponent(s)
        return float(out) if out.ndim == 0 else out

    def _jump_exponent(self, s):
        raise NotImplementedError

    def _jump_increments(self, h, gen):
        raise NotImplementedError

    def increments(self, h, gen):
        """Increment draws D_f(h) elementwise over an array of widths h >= 0."""
        return self._jump_increments(h, gen) + self.drift * h

    def composition_depth(self) -> int:
        return 0


@dataclass(frozen=True)
class Stable(BernsteinDescriptor):
    """f(s) = s^alpha, 0 < alpha < 1."""

    alpha: float

    def __post_init__(self) -> None:
        super().__post_init__()
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"stable index must be in (0, 1), got {self.alpha}")

    def _jump_exponent(self, s):
        return s**self.alpha

    def _jump_increments(self, h, gen):
        return h ** (1.0 / self.alpha) * standard_stable(self.alpha, gen, np.shape(h))


@dataclass(frozen=True)
class Gamma(BernsteinDescriptor):
    """f(s) = p * log(1 + s/alpha); D(t) ~ Gamma(shape p*t, rate alpha)."""

    alpha: float
    p: float

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.alpha <= 0 or self.p <= 0:
            raise DomainError("gamma subordinator needs alpha > 0 and p > 0")

    def _jump_exponent(self, s):
        return self.p * np.log1p(s / self.alpha)

    def _jump_increments(self, h, gen):
        return gen.gamma(self.p * h, 1.0 / self.alpha)


@dataclass(frozen=True)
class TemperedStable(BernsteinDescriptor):
    """f(s) = (mu + s)^alpha - mu^alpha, mu > 0, 0 < alpha < 1."""

    mu: float
    alpha: float

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.mu <= 0:
            raise DomainError("tempering parameter mu must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"stable index must be in (0, 1), got {self.alpha}")

    def _jump_exponent(self, s):
        return (self.mu + s) ** self.alpha - self.mu**self.alpha

    def _jump_increments(self, h, gen):
        shape = np.shape(h)
        flat_h = np.asarray(h, dtype=float).reshape(-1)
        scale = flat_h ** (1.0 / self.alpha)
        out = np.empty(flat_h.shape)
        pending = np.arange(flat_h.size)
        for _ in range(_TSS_MAX_TRIES):
            cand = scale[pending] * standard_stable(self.alpha, gen, pending.shape)
            accept = gen.random(pending.shape) <= np.exp(-self.mu * cand)
            out[pending[accept]] = cand[accept]
            pending = pending[~accept]
            if pending.size == 0:
                return out.reshape(shape)
        raise NonConvergenceError(
            "tempered-stable thinning exceeded the retry cap; "
            "mu * h^(1/alpha) is too large for rejection sampling"
        )


@dataclass(frozen=True)
class InverseGaussian(BernsteinDescriptor):
    """f(s) = delta * (sqrt(2s + gamma^2) - gamma), delta, gamma > 0."""

    delta: float
    gamma: float

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.delta <= 0 or self.gamma <= 0:
            raise DomainError("inverse Gaussian needs delta > 0 and gamma > 0")

    def _jump_exponent(self, s):
        return self.delta * (np.sqrt(2.0 * s + self.gamma**2) - self.gamma)

    def _jump_increments(self, h, gen):
        h = np.asarray(h, dtype=float)
        x = gen.standard_normal(h.shape) ** 2
        u = gen.random(h.shape)
        m = self.delta * h / self.gamma
        with np.errstate(divide="ignore", invalid="ignore"):
            # y = m(1 + t/2 - sqrt(t + t^2/4)) written via the conjugate so no
            # cancellation occurs for small h, where t = x/(gamma*delta*h) blows up
            t = x / (self.gamma * self.delta * h)
            root = 1.0 + 0.5 * t + np.sqrt(t + 0.25 * t * t)
            y = m / root
            # accept y with probability m/(m+y) = root/(root+1), else m^2/y
            draw = np.where(u * (root + 1.0) <= root, y, m * root)
        return np.where(h > 0, draw, 0.0)


@dataclass(frozen=True)
class Composed(BernsteinDescriptor):
    """f(s) = outer(inner(s)); D_f(h) is D_inner run for a time D_outer(h)."""

    outer: BernsteinDescriptor
    inner: BernsteinDescriptor

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.composition_depth() > 8:
            raise DomainError("composition depth exceeds 8")

    def composition_depth(self) -> int:
        return 1 + max(self.outer.composition_depth(), self.inner.composition_depth())

    def _jump_exponent(self, s):
        return self.outer.laplace_exponent(self.inner.laplace_exponent(s))

    def _jump_increments(self, h, gen):
        operational = self.outer.increments(np.asarray(h, dtype=float), gen)
        return self.inner.increments(operational, gen)


def standard_stable(alpha: float, gen: np.random.Generator, shape=()) -> np.ndarray:
    """Draws with Laplace transform exp(-s^alpha) via the Kanter transform."""
    u = np.pi * np.clip(gen.random(shape), 1e-12, 1.0 - 1e-12)
    e = gen.standard_exponential(shape)
    frac = (1.0 - alpha) / alpha
    return (
        np.sin(alpha * u)
        * np.sin((1.0 - alpha) * u) ** frac
        / (np.sin(u) ** (1.0 / alpha) * e**frac)
    )


def bernstein_eval(f: BernsteinDescriptor, s):
    """Evaluate the Laplace exponent f(s) for s >= 0."""
    return f.laplace_exponent(s)


def kernel_codes(f: BernsteinDescriptor):
    """Flat (composed, c0, a0, b0, c1, a1, b1) encoding for the jit kernels.

    Returns None for descriptors the kernels cannot express (drift, nested
    composition); callers then fall back to the numpy block engine.
    """

    def base(d):
        if d.drift != 0.0:
            return None
        if isinstance(d, Stable):
            return (0, d.alpha, 0.0)
        if isinstance(d, Gamma):
            return (1, d.alpha, d.p)
        if isinstance(d, TemperedStable):
            return (2, d.mu, d.alpha)
        if isinstance(d, InverseGaussian):
            return (3, d.delta, d.gamma)
        return None

    if isinstance(f, Composed):
        if f.drift != 0.0:
            return None
        outer, inner = base(f.outer), base(f.inner)
        if outer is None or inner is None:
            return None
        return (True, *outer, *inner)
    flat = base(f)
    if flat is None:
        return None
    return (False, *flat, 0, 0.0, 0.0)


def sample_increment(f: BernsteinDescriptor, h: float, rng) -> float:
    """One draw of the increment D_f(h), h > 0."""
    if not h > 0:
        raise DomainError(f"increment width must be positive, got {h}")
    gen = as_generator(rng)
    return float(f.increments(np.asarray(float(h)), gen))


def sample_increments(f: BernsteinDescriptor, h, rng, size=None) -> np.ndarray:
    """Vectorized increment draws.

    ``h`` may be a scalar or an array; ``size`` (if given) broadcasts a scalar
    h to that many draws.  All entries of h must be positive.
    """
    gen = as_generator(rng)
    h = np.asarray(h, dtype=float)
    if size is not None:
        h = np.broadcast_to(h, size if isinstance(size, tuple) else (size,)).copy()
    if np.any(h <= 0):
        raise DomainError("increment widths must be positive")
    return f.increments(h, gen)


@dataclass(frozen=True)
class SamplePath:
    """A discretized trajectory on a fixed time grid.

    times are strictly increasing from 0; values are nondecreasing with
    values[0] = 0.  Counting paths carry integer values and, when produced by
    an event-driven simulator, the underlying event times.
    """

    times: np.ndarray
    values: np.ndarray
    kind: str
    events: np.ndarray | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "times", np.asarray(self.times, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.kind not in ("subordinator", "inverse_subordinator", "counting"):
            raise DomainError(f"unknown path kind {self.kind!r}")
        if self.times.ndim != 1 or self.times.size == 0:
            raise DomainError("times must be a nonempty 1-d array")
        if self.times[0] != 0.0 or np.any(np.diff(self.times) <= 0):
            raise DomainError("times must be strictly increasing from 0")
        if self.values.shape != self.times.shape:
            raise DomainError("values must align with times")
        if self.values[0] != 0.0 or np.any(np.diff(self.values) < 0):
            raise DomainError("values must be nondecreasing from 0")
        if self.kind == "counting" and not np.all(self.values == np.round(self.values)):
            raise DomainError("counting paths must have integer values")

    def __len__(self) -> int:
        return self.times.size


def validate_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("grid must be a nonempty 1-d array")
    if grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be strictly increasing from 0")
    return grid


def simulate_path(f: BernsteinDescriptor, grid, rng) -> SamplePath:
    """Subordinator path: cumulative independent increments over grid gaps."""
    grid = validate_grid(grid)
    gen = as_generator(rng)
    values = np.zeros(grid.shape)
    if grid.size > 1:
        incr = f.increments(np.diff(grid), gen)
        values[1:] = np.cumsum(incr)
    assert np.all(np.diff(values) >= 0.0)
    return SamplePath(times=grid, values=values, kind="subordinator")


def fractional_moment(
    f: BernsteinDescriptor,
    rho: float,
    t: float,
    method: str = "analytic",
    n: int = 100_000,
    rng: RngStream | np.random.Generator | None = None,
):
    """E[D_f(t)^rho] for rho > 0.

    Closed forms exist for the gamma, inverse Gaussian, and (for rho < alpha)
    stable families; other descriptors must use method="monte_carlo", which
    returns a MonteCarloEstimate instead of a float.
    """
    if rho <= 0:
        raise DomainError("rho must be positive")
    if t <= 0:
        raise DomainError("t must be positive")
    if method == "analytic":
        return _analytic_fractional_moment(f, rho, t)
    if method == "monte_carlo":
        if rng is None:
            raise DomainError("monte_carlo moments need an rng")
        draws = sample_increments(f, t, rng, size=n)
        return estimate_moment(draws, rho)
    raise DomainError(f"unknown method {method!r}")


def _analytic_fractional_moment(f: BernsteinDescriptor, rho: float, t: float) -> float:
    if isinstance(f, BernsteinDescriptor) and f.drift != 0.0:
        raise DomainError("analytic moments are only available for zero drift")
    if isinstance(f, Gamma):
        pt = f.p * t
        return math.exp(math.lgamma(pt + rho) - math.lgamma(pt) - rho * math.log(f.alpha))
    if isinstance(f, InverseGaussian):
        z = f.delta * f.gamma * t
        from .specfun import bessel_k_scaled

        return (
            math.sqrt(2.0 / math.pi)
            * f.delta
            * (f.delta / f.gamma) ** (rho - 0.5)
            * t ** (rho + 0.5)
            * bessel_k_scaled(rho - 0.5, z)
        )
    if isinstance(f, Stable):
        if rho >= f.alpha:
            raise DomainError(
                f"stable moments of order {rho} diverge (alpha = {f.alpha})"
            )
        return t ** (rho / f.alpha) * math.exp(
            math.lgamma(1.0 - rho / f.alpha) - math.lgamma(1.0 - rho)
        )
    raise DomainError(
        f"no analytic fractional moment for {type(f).__name__}; use monte_carlo"
    )
