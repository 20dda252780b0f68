"""Verification suites: each returns a list of :class:`Check` records.

Stochastic comparisons use three combined standard errors; deterministic
closed-form identities use the absolute or relative tolerance named in the
check.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import density
from .census import census, perron_tally, plateau_report, verify_gap, PerronViolation
from .density import DensityParams
from .irreducible import count_reducible
from .poly import RatInterval, RootPairMapInput, cofactor_value, finite_difference_jacobian, jacobian_reference

SIGMA = 3.0


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        d = asdict(self)
        for k in ("measured", "tolerance"):
            v = d[k]
            d[k] = None if v is None or not math.isfinite(v) else float(f"{v:.12g}")
        return d


@dataclass(frozen=True)
class SuiteConfig:
    """Options shared by the suites; ``None`` means the suite's own default."""

    degree: int | None = None
    height: int | None = None
    xi: float | None = None
    interval: RatInterval | None = None
    bmax: int | None = None
    seed: int = 0
    mc_samples: int | None = None
    grid: int | None = None
    workers: int = 1
    budget: int | None = None

    def params(self, n: int = 2, xi: float = 0.0) -> DensityParams:
        return DensityParams(n=n, xi=xi, grid=self.grid, seed=self.seed)

    def degrees(self, default: tuple[int, ...]) -> tuple[int, ...]:
        return (self.degree,) if self.degree is not None else default

    def xis(self, default: tuple[float, ...]) -> tuple[float, ...]:
        return (self.xi,) if self.xi is not None else default


def _within(suite: str, name: str, diff: float, tol: float, detail: str = "") -> Check:
    return Check(suite, name, diff, tol, bool(diff <= tol), detail)


def _sigma_check(suite: str, name: str, a: density.DensityValue, b: density.DensityValue, scale_a: float = 1.0) -> Check:
    diff = abs(scale_a * a.value - b.value)
    tol = SIGMA * math.hypot(scale_a * a.std_error, b.std_error)
    return _within(suite, name, diff, tol)


# -- density suites ------------------------------------------------------------

def suite_functional(cfg: SuiteConfig) -> list[Check]:
    """Evenness and the inversion law of ``phi_n`` on 20 points of ``[0.1, 0.9]``."""
    out = []
    for n in cfg.degrees((2, 3)):
        p = cfg.params(n)
        for t in np.linspace(0.1, 0.9, 20):
            t = float(t)
            fwd = density.phi(n, t, p, method="quadrature")
            back = density.phi(n, -t, p, method="quadrature")
            out.append(_sigma_check("functional", f"even n={n} t={t:.4f}", fwd, back))
            inv = density.phi(n, 1.0 / t, p, method="quadrature")
            out.append(_sigma_check("functional", f"inversion n={n} t={t:.4f}", fwd, inv, scale_a=t * t))
        for t in (0.3, 2.0, 7.5):
            d = abs(density.delta_tilde(n, 0.01, t) - density.delta_tilde(n, 0.01, -t))
            out.append(_within("functional", f"delta-tilde even n={n} t={t}", d, 0.0))
    return out


def delta_tilde_quadrature(n: int, xi: float) -> float:
    """Numerical ``int delta_tilde`` on ``[-T, T]``, ``T = 2/xi``, plus exact tails."""
    T = 2.0 / xi
    r = xi ** -0.5
    seams = [r, 1.0 / xi]
    half = density.integrate_piecewise(lambda t: density.delta_tilde(n, xi, t), 0.0, T, seams)
    tail = -(2.0 ** (n - 2)) / T
    return 2.0 * (half + tail)


def suite_delta_integral(cfg: SuiteConfig) -> list[Check]:
    """Closed form of ``int delta_tilde`` against quadrature, and its small-``xi`` limit."""
    out = []
    for n in cfg.degrees((2, 3, 4)):
        for xi in cfg.xis((0.1, 0.01)):
            closed = density.integral_delta_tilde(n, xi)
            numeric = delta_tilde_quadrature(n, xi)
            out.append(_within("delta-integral", f"integral n={n} xi={xi:g}", abs(closed - numeric), 1e-6))
        lim = density.integral_delta_tilde(n, 1e-6)
        out.append(_within("delta-integral", f"limit n={n} xi=1e-6", abs(lim / 2 ** n - 1.0), 2e-3))
    return out


def omega2_grid(xi: float) -> list[float]:
    r = xi ** -0.5
    return [0.0, 0.5, 1.0, 2.0, 5.0, 0.5 * r, 2.0 * r, 0.9 / xi, 1.5 / xi]


def suite_omega2(cfg: SuiteConfig) -> list[Check]:
    """Numerical ``omega_2`` against its piecewise closed form."""
    out = []
    for xi in cfg.xis((0.1, 0.01)):
        p = cfg.params(2, xi)
        for t in omega2_grid(xi):
            num = density.omega(2, xi, t, p)
            ref = density.omega2_closed(xi, t)
            out.append(_sigma_check("omega2", f"xi={xi:g} t={t:.6g}", num, ref))
    return out


def suite_density_plateau(cfg: SuiteConfig) -> list[Check]:
    """``omega_n = 2^(n-1) xi`` on ``[xi^(-1/2) + 1, xi^(-1) - 2]``."""
    out = []
    for n in cfg.degrees((2, 3, 4)):
        for xi in cfg.xis((0.01,)):
            p = cfg.params(n, xi)
            lo, hi = xi ** -0.5 + 1.0, 1.0 / xi - 2.0
            target = density.closed(2.0 ** (n - 1) * xi)
            for t in np.linspace(lo, hi, 5):
                v = density.omega(n, xi, float(t), p)
                out.append(_sigma_check("density-plateau", f"n={n} xi={xi:g} t={t:.4g}", v, target))
    return out


def suite_vanishing(cfg: SuiteConfig) -> list[Check]:
    """``omega_n`` is exactly zero beyond ``xi^(-1) + 1``."""
    out = []
    for n in cfg.degrees((2, 3, 4)):
        for xi in cfg.xis((0.1, 0.01)):
            p = cfg.params(n, xi)
            for t in (1.0 / xi + 1.0, 1.0 / xi + 5.0, 3.0 / xi):
                for sign in (1.0, -1.0):
                    v = density.omega(n, xi, sign * t, p).value
                    out.append(_within("vanishing", f"n={n} xi={xi:g} t={sign * t:.6g}", abs(v), 0.0))
    return out


def defect_grid(xi: float) -> list[float]:
    r = xi ** -0.5
    return [0.0, 0.5, 1.0, 2.0, r, 2.0 * r, 0.5 / xi, 0.9 / xi, 1.1 / xi]


def fitted_defect_constant(n: int, xi: float, params: DensityParams) -> float:
    """Smallest ``C`` with ``|omega_n - phi_(n-1)| <= C xi`` on :func:`defect_grid`."""
    worst = 0.0
    for t in defect_grid(xi):
        d = abs(density.omega(n, xi, t, params).value - density.phi(n - 1, t, params).value)
        worst = max(worst, d / xi)
    return worst


def suite_defect(cfg: SuiteConfig) -> list[Check]:
    """Fitted uniform-defect constant is stable within a factor 2 when ``xi`` halves."""
    out = []
    for n in cfg.degrees((2, 3)):
        for xi in cfg.xis((0.02,)):
            p = cfg.params(n)
            c1 = fitted_defect_constant(n, xi, p)
            c2 = fitted_defect_constant(n, xi / 2, p)
            ratio = max(c1, c2) / min(c1, c2)
            out.append(_within("defect", f"n={n} xi={xi:g}->{xi / 2:g} C={c1:.4g},{c2:.4g}", ratio, 2.0))
    return out


def suite_mc_agreement(cfg: SuiteConfig) -> list[Check]:
    """Quadrature and Monte Carlo ``phi_n`` agree at 10 random points per degree."""
    out = []
    rng = np.random.default_rng([cfg.seed, 0xA6EE])
    samples = cfg.mc_samples or 100_000
    for n in cfg.degrees((2, 3, 4)):
        p = DensityParams(n=n, grid=cfg.grid, seed=cfg.seed, mc_samples=samples)
        for t in rng.uniform(-3.0, 3.0, size=10):
            q = density.phi(n, float(t), p, method="quadrature")
            m = density.phi(n, float(t), p, method="monte_carlo")
            out.append(_sigma_check("mc-agreement", f"n={n} t={t:.4f}", q, m))
    return out


def suite_close_roots(cfg: SuiteConfig) -> list[Check]:
    """Close-roots measure scales like ``|I|^3``: fitted exponent within ``3 +- 0.4``."""
    n = cfg.degree or 3
    xi = cfg.xi if cfg.xi is not None else 0.05
    samples = cfg.mc_samples or 1_000_000
    center = cfg.interval.lo + cfg.interval.width / 2 if cfg.interval is not None else Fraction(0)
    widths = [Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)]
    vals = [
        density.close_roots_measure(n, xi, RatInterval(center - w / 2, center + w / 2), samples, cfg.seed)
        for w in widths
    ]
    if min(v.value for v in vals) <= 0.0:
        return [Check("close-roots", f"exponent n={n} xi={xi:g}", math.nan, 0.4, False, "no close pairs sampled")]
    slope = float(np.polyfit(np.log([float(w) for w in widths]), np.log([v.value for v in vals]), 1)[0])
    detail = "measures " + ", ".join(f"{v.value:.4g}" for v in vals)
    return [_within("close-roots", f"exponent n={n} xi={xi:g} slope={slope:.3f}", abs(slope - 3.0), 0.4, detail)]


def random_pair_input(rng: np.random.Generator) -> RootPairMapInput:
    """Entries uniform on ``[-2, 2]`` with ``|beta - alpha|``, ``|g(alpha)|``, ``|g(beta)|`` all ``>= 0.1``."""
    while True:
        n = int(rng.integers(2, 5))
        v = rng.uniform(-2.0, 2.0, size=n + 1)
        inp = RootPairMapInput(float(v[0]), tuple(float(x) for x in v[1:n - 1]), float(v[n - 1]), float(v[n]))
        if (abs(inp.beta - inp.alpha) >= 0.1 and abs(cofactor_value(inp, inp.alpha)) >= 0.1
                and abs(cofactor_value(inp, inp.beta)) >= 0.1):
            return inp


def suite_jacobian(cfg: SuiteConfig, count: int = 100) -> list[Check]:
    """Finite-difference Jacobian of the root-pair map against its closed form."""
    rng = np.random.default_rng([cfg.seed, 0x1AC0])
    out = []
    for i in range(count):
        inp = random_pair_input(rng)
        ref = jacobian_reference(inp)
        fd = finite_difference_jacobian(inp)
        out.append(_within("jacobian", f"#{i} n={inp.n}", abs(fd - ref) / abs(ref), 1e-5))
    return out


# -- census suites -------------------------------------------------------------

def suite_plateau(cfg: SuiteConfig) -> list[Check]:
    """Exact plateau count within 15% of ``2^(n-1) Q^(n-1) |I|``."""
    if cfg.degree is None and cfg.height is None and cfg.interval is None:
        cases = [(2, 100, RatInterval(20, 80)), (3, 30, RatInterval(7, 28))]
    else:
        n = cfg.degree or 2
        Q = cfg.height or 100
        cases = [(n, Q, cfg.interval or RatInterval(20, 80))]
    out = []
    for n, Q, I in cases:
        rep = plateau_report(n, Q, I, workers=cfg.workers, budget=cfg.budget)
        detail = f"exact={rep.exact} model={rep.model:.12g}"
        out.append(Check("plateau", f"ratio n={n} Q={Q} I={I}", rep.ratio, 0.15, abs(rep.ratio - 1.0) <= 0.15, detail))
    return out


def suite_gap(cfg: SuiteConfig) -> list[Check]:
    """No counted root within ``kappa(n) / (max(|a|, b)^n Q)`` of any ``a/b``."""
    n = cfg.degree or 2
    Q = cfg.height or 50
    bmax = cfg.bmax if cfg.bmax is not None else 4
    rng = cfg.interval or RatInterval(0, 2)
    rep = verify_gap(n, Q, bmax, rng, budget=cfg.budget)
    out = [
        Check("gap", f"x0={e.x0} r0={float(e.r0):.6g}", e.nearest_root_distance, float(e.r0), e.passed,
              "distance must exceed r0")
        for e in rep.entries
    ]
    out.append(_within("gap", f"violations n={n} Q={Q} bmax={bmax}", rep.violations, 0, f"{rep.roots_checked} roots"))
    return out


def suite_perron(cfg: SuiteConfig) -> list[Check]:
    """Every counted root above ``(n+1)^(1/4) Q^(1/2)`` is certified Perron."""
    n = cfg.degree or 2
    Q = cfg.height or 25
    rep = census(n, Q, cfg.interval, 1, workers=cfg.workers, budget=cfg.budget, predict=False)
    try:
        tally = perron_tally(rep)
    except PerronViolation as exc:
        return [Check("perron", f"threshold n={n} Q={Q}", rep.above_threshold - rep.above_threshold_certified, 0, False, str(exc))]
    detail = f"perron={tally.perron_count} certified={tally.certified_count} above={tally.above_threshold}"
    return [
        _within("perron", f"uncertified above threshold n={n} Q={Q}", rep.above_threshold - rep.above_threshold_certified, 0, detail),
        _within("perron", f"contradictions n={n} Q={Q}", rep.perron_contradictions, 0),
        _within("perron", f"indeterminate n={n} Q={Q}", rep.indeterminate_perron, 0),
    ]


def suite_reducible(cfg: SuiteConfig) -> list[Check]:
    """Reducible quadratic counts: the tiny case exactly, and the ``2Q ln Q`` trend."""
    small = count_reducible(2, 1).count
    lo = count_reducible(2, 200).ratio
    hi = count_reducible(2, 2000).ratio
    return [
        _within("reducible", "R_2(1) = 4", abs(small - 4), 0),
        Check("reducible", "ratio at Q=2000 in [0.6, 1.4]", hi, 0.4, abs(hi - 1.0) <= 0.4),
        Check("reducible", "ratio closer to 1 at Q=2000 than at Q=200", abs(hi - 1.0), abs(lo - 1.0),
              abs(hi - 1.0) < abs(lo - 1.0), f"ratio(200)={lo:.6g} ratio(2000)={hi:.6g}"),
    ]


SUITES: dict[str, Callable[[SuiteConfig], list[Check]]] = {
    "functional": suite_functional,
    "delta-integral": suite_delta_integral,
    "omega2": suite_omega2,
    "density-plateau": suite_density_plateau,
    "vanishing": suite_vanishing,
    "defect": suite_defect,
    "mc-agreement": suite_mc_agreement,
    "close-roots": suite_close_roots,
    "jacobian": suite_jacobian,
    "plateau": suite_plateau,
    "gap": suite_gap,
    "perron": suite_perron,
    "reducible": suite_reducible,
}


# historical name of the delta-integral suite, kept for the command line
ALIASES = {"theorem3": "delta-integral"}


def run_suite(name: str, cfg: SuiteConfig) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn(cfg)]
    try:
        fn = SUITES[ALIASES.get(name, name)]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all") from None
    return fn(cfg)
