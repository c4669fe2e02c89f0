"""Command-line surface: simulate paths, tabulate pmfs and moments, and run
the verification suites.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 runtime sampling failure, 4 series non-convergence.  All randomness flows
from (--seed, replication index); the default master seed is 0xD1CE.  The
environment variable TCFPP_OUT_DIR sets the default output directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, NoisyMomentError, NonConvergenceError
from .fpp import FppParams, fpp_mean, fpp_pmf, fpp_simulate, fpp_variance
from .inverse import InverseStepControl
from .processes import (
    Tcfpp1Spec,
    Tcfpp2Spec,
    tcfpp1_moments,
    tcfpp1_pmf,
    tcfpp1_simulate,
    tcfpp2_moments,
    tcfpp2_pmf,
    tcfpp2_simulate,
)
from .rng import RngStream
from .subordinators import Composed, Gamma, InverseGaussian, Stable, TemperedStable
from .verify import DEFAULT_SEED, SUITES, run_suite

_FAMILIES = {
    "stable": (Stable, ("alpha",)),
    "gamma": (Gamma, ("alpha", "p")),
    "tempered_stable": (TemperedStable, ("mu", "alpha")),
    "inverse_gaussian": (InverseGaussian, ("delta", "gamma")),
}


@dataclass(frozen=True)
class RunConfig:
    """Declarative description of one simulation or evaluation run."""

    process: str
    lam: float
    beta: float
    subordinator: str | None
    sub_params: dict
    t_max: float
    n_points: int
    seed: int
    replications: int
    delta: float | None
    out_format: str
    out_path: str | None

    def __post_init__(self) -> None:
        if self.process not in ("fpp", "tcfpp1", "tcfpp2"):
            raise DomainError(f"unknown process {self.process!r}")
        if self.n_points < 2:
            raise DomainError("need at least 2 grid points")
        if self.replications < 1:
            raise DomainError("need at least 1 replication")
        if self.t_max <= 0:
            raise DomainError("t-max must be positive")
        if self.out_format not in ("csv", "json"):
            raise DomainError(f"unknown format {self.out_format!r}")
        if self.process in ("tcfpp1", "tcfpp2") and self.subordinator is None:
            raise DomainError(f"{self.process} needs --subordinator")

    @property
    def fpp(self) -> FppParams:
        return FppParams(lam=self.lam, beta=self.beta)

    def descriptor(self):
        return _build_descriptor(self.subordinator, self.sub_params)

    def step_control(self) -> InverseStepControl:
        delta = self.delta if self.delta is not None else self.t_max / 2000.0
        return InverseStepControl(delta=delta, horizon=self.t_max)

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_points)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _build_descriptor(name: str, params: dict):
    if name == "composed":
        outer = _build_descriptor(params["outer"], _prefixed(params, "outer_"))
        inner = _build_descriptor(params["inner"], _prefixed(params, "inner_"))
        return Composed(outer=outer, inner=inner)
    if name not in _FAMILIES:
        raise DomainError(f"unknown subordinator family {name!r}")
    cls, fields = _FAMILIES[name]
    missing = [f for f in fields if f not in params]
    if missing:
        raise DomainError(f"{name} needs parameters {missing}")
    return cls(**{f: float(params[f]) for f in fields})


def _prefixed(params: dict, prefix: str) -> dict:
    return {k[len(prefix):]: v for k, v in params.items() if k.startswith(prefix)}


def _parse_params(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if not item:
            continue
        if "=" not in item:
            raise DomainError(f"--params entries must look like key=value, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _config_from_args(args) -> RunConfig:
    out_dir = os.environ.get("TCFPP_OUT_DIR", ".")
    out_path = args.out
    if out_path is not None and not os.path.isabs(out_path):
        out_path = os.path.join(out_dir, out_path)
    return RunConfig(
        process=args.process,
        lam=args.lam,
        beta=args.beta,
        subordinator=args.subordinator,
        sub_params=_parse_params(args.params),
        t_max=args.t_max,
        n_points=args.points,
        seed=args.seed,
        replications=args.reps,
        delta=args.delta,
        out_format=args.format,
        out_path=out_path,
    )


def _simulate_one(config: RunConfig, replication: int):
    stream = RngStream(config.seed, replication)
    grid = config.grid()
    if config.process == "fpp":
        path = fpp_simulate(config.fpp, config.t_max, stream)
        values = np.searchsorted(path.events, grid, side="right").astype(float)
        return grid, values
    if config.process == "tcfpp1":
        spec = Tcfpp1Spec(fpp=config.fpp, sub=config.descriptor())
        path = tcfpp1_simulate(spec, grid, stream)
    else:
        spec = Tcfpp2Spec(fpp=config.fpp, sub=config.descriptor(), ctrl=config.step_control())
        path = tcfpp2_simulate(spec, grid, stream)
    return path.times, path.values


def cmd_simulate(args) -> int:
    config = _config_from_args(args)
    rows = []
    for rep in range(config.replications):
        times, values = _simulate_one(config, rep)
        rows.append((rep, times, values))
    if config.out_format == "csv":
        lines = ["t,value,replication"]
        for rep, times, values in rows:
            for t, v in zip(times, values):
                lines.append(f"{t:.17g},{v:.17g},{rep}")
        payload = "\n".join(lines) + "\n"
    else:
        payload = json.dumps(
            {
                "config": config.to_dict(),
                "data": [
                    {"replication": rep, "t": list(times), "value": list(values)}
                    for rep, times, values in rows
                ],
            },
            indent=2,
        )
    if config.out_path:
        with open(config.out_path, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def cmd_pmf(args) -> int:
    config = _config_from_args(args)
    t = args.t
    rows = []
    total = 0.0
    for n in range(args.n_max + 1):
        if config.process == "fpp":
            value, provenance = fpp_pmf(config.fpp, n, t), "analytic"
        elif config.process == "tcfpp1":
            spec = Tcfpp1Spec(fpp=config.fpp, sub=config.descriptor())
            try:
                value, provenance = tcfpp1_pmf(spec, n, t), "analytic"
            except DomainError:
                value = tcfpp1_pmf(
                    spec, n, t, moment_method="monte_carlo", rng=RngStream(config.seed, n)
                )
                provenance = "mc"
        else:
            spec = Tcfpp2Spec(fpp=config.fpp, sub=config.descriptor(), ctrl=config.step_control())
            est = tcfpp2_pmf(spec, n, t, n_paths=args.mc_paths, rng=RngStream(config.seed, n))
            value, provenance = est.value, f"mc+-{est.std_error:.3g}"
        total += value
        rows.append((n, value, provenance))
    print("n,pmf,provenance")
    for n, value, provenance in rows:
        print(f"{n},{value:.17g},{provenance}")
    print(f"sum,{total:.17g},")
    return 0


def cmd_moments(args) -> int:
    config = _config_from_args(args)
    s, t = args.s, args.t
    if config.process == "fpp":
        from .fpp import fpp_covariance

        rows = [
            ("mean", fpp_mean(config.fpp, t), "analytic"),
            ("variance", fpp_variance(config.fpp, t), "analytic"),
            ("covariance", fpp_covariance(config.fpp, s, t), "analytic"),
        ]
    elif config.process == "tcfpp1":
        spec = Tcfpp1Spec(fpp=config.fpp, sub=config.descriptor())
        try:
            mom = tcfpp1_moments(spec, s, t, rng=RngStream(config.seed, 0))
            method = "analytic"
        except DomainError:
            mom = tcfpp1_moments(
                spec, s, t, moment_method="monte_carlo", rng=RngStream(config.seed, 0)
            )
            method = "mc"
        rows = [
            ("mean", mom.mean, method if mom.mean_se == 0 else f"mc+-{mom.mean_se:.3g}"),
            ("variance", mom.variance, method if mom.variance_se == 0 else f"mc+-{mom.variance_se:.3g}"),
            ("covariance", mom.covariance, f"{method}+mc+-{mom.covariance_se:.3g}"),
        ]
    else:
        spec = Tcfpp2Spec(fpp=config.fpp, sub=config.descriptor(), ctrl=config.step_control())
        mom = tcfpp2_moments(spec, s, t, n_paths=args.mc_paths, rng=RngStream(config.seed, 0))
        rows = [
            ("mean", mom.mean, f"mc+-{mom.mean_se:.3g}"),
            ("variance", mom.variance, f"mc+-{mom.variance_se:.3g}"),
            ("covariance", mom.covariance, f"mc+-{mom.covariance_se:.3g}"),
        ]
    print("moment,value,provenance")
    for name, value, provenance in rows:
        print(f"{name},{value:.17g},{provenance}")
    return 0


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}", file=sys.stderr)
        return 2
    report = run_suite(args.suite, seed=args.seed)
    payload = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    else:
        print(payload)
    return 0 if report["all_pass"] else 1


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--process", default="fpp", choices=("fpp", "tcfpp1", "tcfpp2"))
    parser.add_argument("--beta", type=float, default=0.6)
    parser.add_argument("--lambda", dest="lam", type=float, default=1.5)
    parser.add_argument("--subordinator", default=None)
    parser.add_argument("--params", default=None, help="comma-separated key=value pairs")
    parser.add_argument("--t-max", dest="t_max", type=float, default=10.0)
    parser.add_argument("--points", type=int, default=1000)
    parser.add_argument("--reps", type=int, default=1)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--delta", type=float, default=None)
    parser.add_argument("--format", default="csv", choices=("csv", "json"))
    parser.add_argument("--out", default=None)
    parser.add_argument("--mc-paths", dest="mc_paths", type=int, default=10_000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tcfpp",
        description="simulate and verify fractional Poisson processes on random clocks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="write sample paths")
    _add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_pmf = sub.add_parser("pmf", help="tabulate the pmf at a fixed time")
    _add_common(p_pmf)
    p_pmf.add_argument("--n-max", dest="n_max", type=int, default=20)
    p_pmf.add_argument("--t", type=float, default=1.0)
    p_pmf.set_defaults(func=cmd_pmf)

    p_mom = sub.add_parser("moments", help="mean/variance/covariance table")
    _add_common(p_mom)
    p_mom.add_argument("--s", type=float, default=1.0)
    p_mom.add_argument("--t", type=float, default=2.0)
    p_mom.set_defaults(func=cmd_moments)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("suite")
    p_ver.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_ver.add_argument("--out", default=None)
    p_ver.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NonConvergenceError as exc:
        print(f"series did not converge: {exc}", file=sys.stderr)
        return 4
    except (NoisyMomentError, RuntimeError, ArithmeticError) as exc:
        print(f"sampling failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
