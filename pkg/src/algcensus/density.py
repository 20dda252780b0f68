"""Density functions of real algebraic numbers and integers.

``phi(n, t)`` is the limit density of degree-``n`` real algebraic numbers,

    phi_n(t) = int_{G_n(t)} |sum_k k p_k t^(k-1)| dp,
    G_n(t)   = {p in [-1,1]^n : |sum_k p_k t^k| <= 1},

and ``omega(n, xi, t)`` is its analogue for monic polynomials scaled by the
height, with the leading coefficient frozen at ``xi = 1/Q``.

Both integrals have the same shape: ``|a0 + a.y|`` integrated over the part of
the cube ``[-1,1]^m`` where ``|c0 + c.y| <= 1``.  Integrand and constraint are
linear in the last coordinate, so that coordinate is integrated exactly and the
remaining ``m-1`` coordinates go through a randomly shifted midpoint grid.  The
shifts give an honest standard error; Monte Carlo is kept as an independent
route.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy import integrate

from .poly import RatInterval

SERIES_EDGE = 1.0 - 1.0 / math.sqrt(2.0)
RECIPROCAL_EDGE = 2.0 + math.sqrt(2.0)

# points per axis by number of numerically integrated dimensions
DEFAULT_GRID = {1: 4096, 2: 256, 3: 48, 4: 20}
MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class DensityParams:
    n: int = 2
    xi: float = 0.0
    grid: int | None = None
    shifts: int = 32
    mc_samples: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.grid is not None and self.grid < 8:
            raise ValueError("grid must have at least 8 points per axis")
        if self.shifts < 2:
            raise ValueError("at least two random shifts are needed for an error estimate")


@dataclass(frozen=True)
class DensityValue:
    value: float
    std_error: float
    method: str  # closed_form | nested_quadrature | monte_carlo


def _rounding_floor(value: float) -> float:
    return 1e-13 * max(1.0, abs(value))


def closed(value: float) -> DensityValue:
    return DensityValue(float(value), _rounding_floor(value), "closed_form")


# -- the slab integral ---------------------------------------------------

def _last_coordinate(A, C, B: float, s: float):
    """Exact ``int |A + B x| dx`` over ``x in [-1, 1]`` with ``|C + s x| <= 1``."""
    A = np.asarray(A, dtype=float)
    C = np.asarray(C, dtype=float)
    if s == 0.0:
        inside = np.abs(C) <= 1.0
        L = np.where(inside, -1.0, 0.0)
        U = np.where(inside, 1.0, 0.0)
    else:
        lo = (-1.0 - C) / s
        hi = (1.0 - C) / s
        if s < 0:
            lo, hi = hi, lo
        L = np.maximum(-1.0, lo)
        U = np.minimum(1.0, hi)
    w = U - L
    yl = A + B * L
    yu = A + B * U
    same = yl * yu >= 0.0
    # the split form avoids dividing by B, which vanishes at t = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        crossing = (yl * yl + yu * yu) / (2.0 * (np.abs(yl) + np.abs(yu)))
    val = np.where(same, np.abs(yl + yu) / 2.0, crossing) * w
    return np.where(w > 0.0, val, 0.0)


def slab_integral(a0: float, a: np.ndarray, c0: float, c: np.ndarray, params: DensityParams) -> DensityValue:
    """``int_{[-1,1]^m, |c0 + c.y| <= 1} |a0 + a.y| dy``."""
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    m = len(a)
    dims = m - 1
    if dims == 0:
        v = float(_last_coordinate(a0, c0, a[0], c[0]))
        return DensityValue(v, _rounding_floor(v), "nested_quadrature")
    g = params.grid or DEFAULT_GRID.get(dims, 16)
    h = 2.0 / g
    rng = np.random.default_rng([params.seed, 0x51AB, m])
    base = np.arange(g, dtype=float)
    estimates = np.empty(params.shifts)
    for r in range(params.shifts):
        u = rng.random(dims)
        axes = np.meshgrid(*[-1.0 + (base + u[j]) * h for j in range(dims)], indexing="ij", sparse=True)
        A = a0 + sum(a[j] * axes[j] for j in range(dims))
        C = c0 + sum(c[j] * axes[j] for j in range(dims))
        vals = _last_coordinate(A, C, a[-1], c[-1])
        estimates[r] = float(vals.sum()) * h ** dims
    value = float(estimates.mean())
    se = float(estimates.std(ddof=1) / math.sqrt(params.shifts))
    return DensityValue(value, max(se, _rounding_floor(value)), "nested_quadrature")


def slab_monte_carlo(a0: float, a: np.ndarray, c0: float, c: np.ndarray, samples: int, seed: int) -> DensityValue:
    """Plain Monte Carlo for the same integral, sampled in fixed-size chunks.

    Chunk ``k`` draws from a generator keyed by ``(seed, k)``, so the estimate
    does not depend on how chunks are scheduled.
    """
    if samples < 10_000:
        raise ValueError("Monte Carlo needs at least 10^4 samples")
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    m = len(a)
    total = 0.0
    total_sq = 0.0
    done = 0
    k = 0
    while done < samples:
        size = min(MC_CHUNK, samples - done)
        rng = np.random.default_rng([seed, k])
        y = rng.uniform(-1.0, 1.0, size=(size, m))
        f = np.abs(a0 + y @ a) * (np.abs(c0 + y @ c) <= 1.0)
        total += float(f.sum())
        total_sq += float((f * f).sum())
        done += size
        k += 1
    vol = 2.0 ** m
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return DensityValue(vol * mean, vol * math.sqrt(var / samples), "monte_carlo")


# -- phi -------------------------------------------------------------------

def phi_series(n: int, t: float) -> float:
    """Polynomial form of ``phi_n`` valid for ``|t| <= 1 - 1/sqrt(2)``."""
    s = sum((k + 1) ** 2 * t ** (2 * k) for k in range(1, n))
    return 2.0 ** (n - 1) * (1.0 + s / 3.0)


def phi_reciprocal_series(n: int, t: float) -> float:
    """Form of ``phi_n`` valid for ``|t| >= 2 + sqrt(2)``."""
    s = sum((k + 1) ** 2 * t ** (-2 * k) for k in range(1, n))
    return 2.0 ** (n - 1) / (t * t) * (1.0 + s / 3.0)


def _phi_forms(n: int, t: float) -> tuple[np.ndarray, np.ndarray]:
    ks = np.arange(1, n + 1)
    return ks * t ** (ks - 1.0), t ** ks.astype(float)


def phi(n: int, t: float, params: DensityParams | None = None, method: str = "auto") -> DensityValue:
    """Density ``phi_n(t)`` of real algebraic numbers of degree ``n``.

    ``method="auto"`` uses closed forms where they exist (``n = 1`` and the two
    series zones) and quadrature elsewhere; ``"quadrature"`` and
    ``"monte_carlo"`` force a numerical route.
    """
    if n < 1:
        raise ValueError("phi needs n >= 1")
    params = params or DensityParams()
    t = float(t)
    if method == "auto":
        if n == 1:
            return closed(1.0 / max(1.0, t * t))
        if abs(t) <= SERIES_EDGE:
            return closed(phi_series(n, t))
        if abs(t) >= RECIPROCAL_EDGE:
            return closed(phi_reciprocal_series(n, t))
        method = "quadrature"
    a, c = _phi_forms(n, t)
    if method == "quadrature":
        return slab_integral(0.0, a, 0.0, c, params)
    if method == "monte_carlo":
        return slab_monte_carlo(0.0, a, 0.0, c, params.mc_samples, params.seed)
    raise ValueError(f"unknown method {method!r}")


# -- omega -----------------------------------------------------------------

def omega(n: int, xi: float, t: float, params: DensityParams | None = None, method: str = "quadrature") -> DensityValue:
    """Density ``omega_n(xi, t)`` of real algebraic integers at scale ``xi = 1/Q``.

    At ``xi = 0`` this is exactly ``phi(n - 1, t)``.
    """
    if n < 2:
        raise ValueError("omega needs n >= 2")
    if not 0.0 <= xi <= 1.0:
        raise ValueError("omega needs 0 <= xi <= 1")
    params = params or DensityParams()
    t = float(t)
    if xi == 0.0:
        return phi(n - 1, t, params, method="auto" if method == "quadrature" else method)
    ks = np.arange(1, n)
    a = ks * t ** (ks - 1.0)
    c = t ** ks.astype(float)
    a0 = n * xi * t ** (n - 1)
    c0 = xi * t ** n
    if method == "quadrature":
        return slab_integral(a0, a, c0, c, params)
    if method == "monte_carlo":
        return slab_monte_carlo(a0, a, c0, c, params.mc_samples, params.seed)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class Omega2Breakpoints:
    t1: float
    t2: float
    t3: float
    t4: float
    t5: float

    @classmethod
    def at(cls, xi: float) -> "Omega2Breakpoints":
        r_plus = math.sqrt(1.0 + 4.0 * xi)
        r_minus = math.sqrt(1.0 - 4.0 * xi)
        return cls(
            (-1.0 + r_plus) / (2.0 * xi),
            (1.0 - r_minus) / (2.0 * xi),
            1.0 / math.sqrt(xi),
            (1.0 + r_minus) / (2.0 * xi),
            (1.0 + r_plus) / (2.0 * xi),
        )


def omega2_closed(xi: float, t: float) -> DensityValue:
    """Piecewise closed form of ``omega_2(xi, t)``, valid for ``0 < xi <= 1/4``."""
    if not 0.0 < xi <= 0.25:
        raise ValueError(f"the closed form of omega_2 needs 0 < xi <= 1/4, got {xi}")
    bp = Omega2Breakpoints.at(xi)
    u = abs(float(t))
    if u <= bp.t1:
        v = 1.0 + 4.0 * xi ** 2 * u ** 2
    elif u <= bp.t2:
        v = 0.5 / u ** 2 + 0.5 + xi * (1.0 - 2.0 * u) + 2.5 * xi ** 2 * u ** 2
    elif u <= bp.t3:
        v = 1.0 / u ** 2 + xi ** 2 * u ** 2
    elif u <= bp.t4:
        v = 2.0 * xi
    elif u <= bp.t5:
        v = 0.5 / u ** 2 - 0.5 + xi * (1.0 + 2.0 * u) - 1.5 * xi ** 2 * u ** 2
    else:
        v = 0.0
    return closed(v)


# -- the simplified defect -------------------------------------------------

def delta_tilde(n: int, xi: float, t: float) -> float:
    """Piecewise correction ``omega~_n - phi_{n-1}`` used in the main counting law."""
    if n < 2:
        raise ValueError("delta_tilde needs n >= 2")
    if not 0.0 < xi <= 1.0:
        raise ValueError("delta_tilde needs 0 < xi <= 1")
    u = abs(float(t))
    scale = 2.0 ** (n - 2)
    if u <= xi ** -0.5:
        return scale * xi * xi * u * u
    if u <= 1.0 / xi:
        return scale * (2.0 * xi - 1.0 / (u * u))
    return -scale / (u * u)


def integral_delta_tilde(n: int, xi: float) -> float:
    """``int_R delta_tilde(n, xi, t) dt = 2^n (1 - 4/3 sqrt(xi))``, exact."""
    if n < 2 or not 0.0 < xi <= 1.0:
        raise ValueError("integral_delta_tilde needs n >= 2 and 0 < xi <= 1")
    return 2.0 ** n * (1.0 - 4.0 / 3.0 * math.sqrt(xi))


def delta_tilde_antiderivative(n: int, xi: float, t: float) -> float:
    """``int_0^t delta_tilde(n, xi, s) ds`` (odd in ``t``)."""
    u = abs(float(t))
    scale = 2.0 ** (n - 2)
    r = xi ** -0.5
    big = 1.0 / xi
    if u <= r:
        v = xi * xi * u ** 3 / 3.0
    elif u <= big:
        v = xi * xi * r ** 3 / 3.0 + 2.0 * xi * (u - r) + (1.0 / u - 1.0 / r)
    else:
        v = xi * xi * r ** 3 / 3.0 + 2.0 * xi * (big - r) + (1.0 / big - 1.0 / r) + (1.0 / u - 1.0 / big)
    return math.copysign(scale * v, t)


# -- predicted counts ------------------------------------------------------

def _seams(points: list[float], lo: float, hi: float) -> list[float]:
    return sorted({p for p in points if lo < p < hi})


def integrate_piecewise(f: Callable[[float], float], lo: float, hi: float, seams: list[float]) -> float:
    edges = [lo] + _seams(seams, lo, hi) + [hi]
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges, edges[1:]):
            val, _ = integrate.quad(f, a, b, limit=200, epsabs=1e-10, epsrel=1e-9)
            total += val
    return total


def predicted_count(n: int, Q: int, interval: RatInterval, params: DensityParams | None = None) -> float:
    """Main-term prediction ``Q^n int_I (phi_{n-1}(t) + delta_tilde_n(1/Q, t)) dt``."""
    if n < 2 or Q < 2:
        raise ValueError("predicted_count needs n >= 2 and Q >= 2")
    params = params or DensityParams()
    xi = 1.0 / Q
    lo, hi = float(interval.lo), float(interval.hi)
    r = math.sqrt(Q)
    seams = [s * v for v in (1.0, r, float(Q), SERIES_EDGE, RECIPROCAL_EDGE) for s in (-1.0, 1.0)] + [0.0]

    def density(t: float) -> float:
        return phi(n - 1, t, params).value + delta_tilde(n, xi, t)

    return Q ** n * integrate_piecewise(density, lo, hi, seams)


def plateau_density(n: int, Q: int) -> float:
    """Count per unit length on the plateau ``Q^(1/2) < |t| <= Q``."""
    return 2.0 ** (n - 1) * Q ** (n - 1)


# -- close pairs of roots -------------------------------------------------

def count_roots_in_batch(coeffs: np.ndarray, xi: float, lo: float, hi: float, imag_tol: float = 1e-7) -> np.ndarray:
    """Real roots in ``[lo, hi)`` of ``xi x^n + sum a_k x^k`` for each row ``(a_0..a_{n-1})``."""
    N, n = coeffs.shape
    comp = np.zeros((N, n, n))
    if n > 1:
        idx = np.arange(n - 1)
        comp[:, idx + 1, idx] = 1.0
    comp[:, :, n - 1] = -coeffs / xi
    ev = np.linalg.eigvals(comp)
    real = np.abs(ev.imag) <= imag_tol * (1.0 + np.abs(ev))
    x = ev.real
    return np.count_nonzero(real & (x >= lo) & (x < hi), axis=1)


def close_roots_measure(n: int, xi: float, interval: RatInterval, samples: int, seed: int) -> DensityValue:
    """Monte Carlo measure of coefficient vectors with two or more roots in ``interval``.

    Lower coefficients are uniform on ``[-1,1]^n`` and the leading one is
    fixed at ``xi``; the result is the fraction times ``2^n``.
    """
    if not 0.0 < xi <= 1.0:
        raise ValueError("close_roots_measure needs 0 < xi <= 1")
    if interval.width > 1:
        raise ValueError("close_roots_measure needs |I| <= 1")
    if samples < 1:
        raise ValueError("samples must be positive")
    lo, hi = float(interval.lo), float(interval.hi)
    hits = 0
    done = 0
    k = 0
    while done < samples:
        size = min(MC_CHUNK, samples - done)
        rng = np.random.default_rng([seed, 0xC105E, k])
        a = rng.uniform(-1.0, 1.0, size=(size, n))
        hits += int(np.count_nonzero(count_roots_in_batch(a, xi, lo, hi) >= 2))
        done += size
        k += 1
    f = hits / samples
    vol = 2.0 ** n
    return DensityValue(vol * f, vol * math.sqrt(f * (1.0 - f) / samples), "monte_carlo")


def with_grid(params: DensityParams, grid: int | None) -> DensityParams:
    return replace(params, grid=grid)
