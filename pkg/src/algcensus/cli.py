"""Command-line interface: ``census``, ``density`` and ``verify`` subcommands.

Exit codes: 0 success, 1 a verification check failed, 2 invalid
configuration, 3 the enumeration budget was refused.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import density
from .census import census, fmt_float
from .density import DensityParams
from .irreducible import BUDGET_ENV, BudgetExceeded
from .poly import RatInterval
from .verify import ALIASES, SUITES, SuiteConfig, run_suite

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3

# options whose value may begin with '-', e.g. --interval -3/1:3/1
_VALUE_FLAGS = {"--interval", "--t-range", "--xi"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    degree: int | None
    height: int | None
    interval: RatInterval | None
    bins: int
    grid: int | None
    mc_samples: int | None
    seed: int
    workers: int
    output: str | None
    format: str

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        cfg = cls(
            subcommand=args.subcommand,
            degree=args.degree,
            height=getattr(args, "height", None),
            interval=getattr(args, "interval", None),
            bins=getattr(args, "bins", 1),
            grid=args.grid,
            mc_samples=args.mc_samples,
            seed=args.seed,
            workers=getattr(args, "workers", 1),
            output=args.output,
            format=args.format,
        )
        _require(cfg.grid is None or cfg.grid >= 8, "--grid must be >= 8")
        _require(cfg.mc_samples is None or cfg.mc_samples >= 10_000, "--mc-samples must be >= 10000")
        _require(cfg.bins >= 1, "--bins must be >= 1")
        _require(cfg.workers >= 1, "--workers must be >= 1")
        return cfg


def _interval(text: str) -> RatInterval:
    try:
        return RatInterval.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _t_range(text: str) -> list[float]:
    try:
        lo, hi, count = text.split(":")
        return [float(v) for v in np.linspace(float(lo), float(hi), int(count))]
    except ValueError:
        raise argparse.ArgumentTypeError(f"t range {text!r} must look like lo:hi:count") from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--degree", type=int, help="polynomial degree n")
    p.add_argument("--grid", type=int, help="quadrature points per axis")
    p.add_argument("--mc-samples", type=int, help="Monte Carlo sample count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="algcensus", description="Census and densities of real algebraic integers.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    c = sub.add_parser("census", help="exact count of real algebraic integers")
    _common(c)
    c.add_argument("--height", type=int, required=True, help="height bound Q")
    c.add_argument("--interval", type=_interval, help="num/den:num/den (default: whole line)")
    c.add_argument("--bins", type=int, default=1)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--budget", type=int, help=f"max polynomials to enumerate (default ${BUDGET_ENV} or 5e7)")
    c.add_argument("--no-perron", action="store_true", help="skip Perron classification")
    c.add_argument("--no-predict", action="store_true", help="skip the density prediction")

    d = sub.add_parser("density", help="emit a density curve")
    _common(d)
    d.add_argument("--fn", choices=("phi", "omega", "omega2", "delta-tilde"), required=True)
    d.add_argument("--xi", type=float, help="scale xi = 1/Q")
    d.add_argument("--t", type=float, nargs="+", help="evaluation points")
    d.add_argument("--t-range", type=_t_range, help="lo:hi:count evenly spaced points")
    d.add_argument("--method", choices=("auto", "quadrature", "monte_carlo"), default="auto")

    v = sub.add_parser("verify", help="run a verification suite")
    _common(v)
    v.add_argument("--suite", choices=tuple(SUITES) + tuple(ALIASES) + ("all",), required=True)
    v.add_argument("--height", type=int)
    v.add_argument("--xi", type=float)
    v.add_argument("--interval", type=_interval)
    v.add_argument("--bmax", type=int)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--budget", type=int)
    v.set_defaults(format="json")
    return parser


def preprocess_argv(argv: list[str]) -> list[str]:
    """Glue ``--flag -value`` into ``--flag=-value`` so argparse keeps the value."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


# -- subcommands ---------------------------------------------------------------

def cmd_census(args: argparse.Namespace) -> int:
    n, Q = args.degree, args.height
    _require(n is not None and n >= 2, "census needs --degree >= 2")
    _require(Q >= 1, "census needs --height >= 1")
    params = DensityParams(n=n, grid=args.grid, seed=args.seed)
    rep = census(n, Q, args.interval, args.bins, params, workers=args.workers, budget=args.budget,
                 perron=not args.no_perron, predict=not args.no_predict)
    _emit(rep.to_json() if args.format == "json" else rep.to_csv(), args.output)
    line = f"Omega_{n}({Q}, {rep.range}) = {rep.total}\n"
    (sys.stdout if args.output else sys.stderr).write(line)
    return EXIT_OK


def density_rows(args: argparse.Namespace) -> list[tuple[float, density.DensityValue]]:
    ts: list[float] = []
    if args.t:
        ts.extend(args.t)
    if args.t_range:
        ts.extend(args.t_range)
    _require(bool(ts), "density needs --t or --t-range")
    n = args.degree
    params = DensityParams(n=n or 2, xi=args.xi or 0.0, grid=args.grid, seed=args.seed,
                           mc_samples=args.mc_samples or 100_000)
    fn = args.fn
    if fn == "phi":
        _require(n is not None and n >= 1, "phi needs --degree >= 1")
        return [(t, density.phi(n, t, params, method=args.method)) for t in ts]
    xi = args.xi
    if fn == "omega2":
        _require(xi is not None and 0.0 < xi <= 0.25, "omega2 needs 0 < --xi <= 1/4")
        return [(t, density.omega2_closed(xi, t)) for t in ts]
    if fn == "omega":
        _require(n is not None and n >= 2, "omega needs --degree >= 2")
        _require(xi is not None and 0.0 <= xi <= 1.0, "omega needs 0 <= --xi <= 1")
        method = "quadrature" if args.method == "auto" else args.method
        return [(t, density.omega(n, xi, t, params, method=method)) for t in ts]
    _require(n is not None and n >= 2, "delta-tilde needs --degree >= 2")
    _require(xi is not None and 0.0 < xi <= 1.0, "delta-tilde needs 0 < --xi <= 1")
    return [(t, density.closed(density.delta_tilde(n, xi, t))) for t in ts]


def cmd_density(args: argparse.Namespace) -> int:
    rows = density_rows(args)
    if args.format == "json":
        payload = [{"t": float(f"{t:.12g}"), "value": float(f"{v.value:.12g}"),
                    "std_error": float(f"{v.std_error:.12g}"), "method": v.method} for t, v in rows]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "value", "std_error", "method"])
        for t, v in rows:
            w.writerow([fmt_float(t), fmt_float(v.value), fmt_float(v.std_error), v.method])
        text = buf.getvalue()
    _emit(text, args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.degree is not None:
        _require(args.degree >= 1, "--degree must be >= 1")
    if args.height is not None:
        _require(args.height >= 1, "--height must be >= 1")
    if args.xi is not None:
        _require(0.0 < args.xi <= 1.0, "--xi must lie in (0, 1]")
    cfg = SuiteConfig(
        degree=args.degree, height=args.height, xi=args.xi, interval=args.interval, bmax=args.bmax,
        seed=args.seed, mc_samples=args.mc_samples, grid=args.grid, workers=args.workers, budget=args.budget,
    )
    checks = run_suite(args.suite, cfg)
    if args.format == "json":
        text = json.dumps({"suite": args.suite, "passed": all(c.passed for c in checks),
                           "checks": [c.to_json() for c in checks]}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "name", "measured", "tolerance", "passed"])
        for c in checks:
            w.writerow([c.suite, c.name, fmt_float(float(c.measured)), fmt_float(float(c.tolerance)), int(c.passed)])
        text = buf.getvalue()
    _emit(text, args.output)
    failed = [c for c in checks if not c.passed]
    for c in failed:
        print(f"FAIL {c.suite}: {c.name} measured={c.measured} tolerance={c.tolerance} {c.detail}", file=sys.stderr)
    print(f"{args.suite}: {len(checks) - len(failed)}/{len(checks)} checks passed", file=sys.stderr)
    return EXIT_FAILED if failed else EXIT_OK


COMMANDS = {"census": cmd_census, "density": cmd_density, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    argv = preprocess_argv(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        RunConfig.from_args(args)
        return COMMANDS[args.subcommand](args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
