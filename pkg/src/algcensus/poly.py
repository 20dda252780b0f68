"""Monic integer polynomials, exact rational helpers and the root-pair map.

Coefficients are stored in ascending order.  A :class:`MonicIntPoly` holds
``(a_0, ..., a_{n-1})``; the leading coefficient 1 is implicit.  Plain integer
polynomials (used by the Sturm and factoring code) are tuples holding every
coefficient, leading one included.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .intpoly import hom_eval


@dataclass(frozen=True)
class MonicIntPoly:
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) < 1:
            raise ValueError("a monic polynomial needs degree >= 1")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def full(self) -> tuple[int, ...]:
        """All coefficients, ascending, leading 1 included."""
        return self.coeffs + (1,)

    @classmethod
    def from_full(cls, full: Sequence[int]) -> "MonicIntPoly":
        if full[-1] != 1:
            raise ValueError(f"polynomial {tuple(full)} is not monic")
        return cls(tuple(full[:-1]))

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __call__(self, x):
        acc = 1
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        return format_poly(self.full)


def format_poly(full: Sequence[int], var: str = "x") -> str:
    terms = []
    for k in range(len(full) - 1, -1, -1):
        c = full[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + (var if k == 1 else f"{var}^{k}")
        terms.append((sign, body))
    if not terms:
        return "0"
    head_sign, head = terms[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# -- rationals -----------------------------------------------------------

def parse_rat(text: str) -> Fraction:
    """Parse ``num/den`` (or a bare integer).  Decimal input is refused."""
    s = text.strip()
    if any(ch in s for ch in ".eE"):
        raise ValueError(f"decimal input {text!r} is not exact; write it as num/den")
    if "/" in s:
        num, den = s.split("/", 1)
        d = int(den)
        if d <= 0:
            raise ValueError(f"denominator must be positive in {text!r}")
        return Fraction(int(num), d)
    return Fraction(int(s))


def format_rat(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RatInterval:
    """Half-open interval ``[lo, hi)`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi})")

    @classmethod
    def parse(cls, text: str) -> "RatInterval":
        try:
            lo, hi = text.split(":")
        except ValueError:
            raise ValueError(f"interval {text!r} must look like num/den:num/den") from None
        return cls(parse_rat(lo), parse_rat(hi))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x < self.hi

    def mirror(self) -> "RatInterval":
        """The interval ``[-hi, -lo)``; note this is not the pointwise mirror."""
        return RatInterval(-self.hi, -self.lo)

    def split(self, parts: int) -> list["RatInterval"]:
        step = self.width / parts
        edges = [self.lo + step * i for i in range(parts)] + [self.hi]
        return [RatInterval(a, b) for a, b in zip(edges, edges[1:])]

    def to_json(self) -> dict[str, str]:
        return {"lo": format_rat(self.lo), "hi": format_rat(self.hi)}

    def __str__(self) -> str:
        return f"[{format_rat(self.lo)}, {format_rat(self.hi)})"


# -- enumeration and basic quantities ------------------------------------

def box_size(n: int, Q: int) -> int:
    return (2 * Q + 1) ** n


def enumerate_coeffs(n: int, Q: int, top: Sequence[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Coefficient tuples ``(a_0, ..., a_{n-1})`` of the box ``[-Q, Q]^n``.

    Order is lexicographic on ``(a_{n-1}, ..., a_0)``.  ``top`` restricts the
    values of ``a_{n-1}``, which is how the census slices work between workers.
    """
    if n < 1 or Q < 1:
        raise ValueError(f"need n >= 1 and Q >= 1, got n={n}, Q={Q}")
    span = range(-Q, Q + 1)
    tops = span if top is None else top
    for rev in itertools.product(tops, *([span] * (n - 1))):
        yield rev[::-1]


def enumerate_monic(n: int, Q: int, top: Sequence[int] | None = None) -> Iterator[MonicIntPoly]:
    for coeffs in enumerate_coeffs(n, Q, top):
        yield MonicIntPoly(coeffs)


def height(p: MonicIntPoly) -> int:
    return max(1, max(abs(c) for c in p.coeffs))


def eval_scaled(p: MonicIntPoly | Sequence[int], x: Fraction) -> int:
    """``den(x)^deg * p(x)`` in exact integer arithmetic.

    Accepts a :class:`MonicIntPoly` or a full ascending coefficient sequence.
    The sign matches ``p(x)`` and the value is zero exactly at roots.
    """
    full = p.full if isinstance(p, MonicIntPoly) else tuple(p)
    x = Fraction(x)
    return hom_eval(full, x.numerator, x.denominator)


def mahler_upper_bound(p: MonicIntPoly) -> float:
    """Upper bound ``sqrt(n+1) * H(p)`` for the Mahler measure."""
    return math.sqrt(p.degree + 1) * height(p)


def mahler_measure(full: Sequence[float]) -> float:
    """Numerical Mahler measure ``|lc| * prod max(1, |root|)``."""
    roots = np.roots(np.asarray(full[::-1], dtype=float))
    return abs(full[-1]) * float(np.prod(np.maximum(1.0, np.abs(roots))))


# -- the root-pair coordinate change -------------------------------------

@dataclass(frozen=True)
class RootPairMapInput:
    """``xi`` leading coefficient, cofactor ``b = (b_0, ..., b_{n-3})``, roots ``alpha``, ``beta``."""

    xi: float
    b: tuple[float, ...]
    alpha: float
    beta: float

    @property
    def n(self) -> int:
        return len(self.b) + 2


def _cofactor(inp: RootPairMapInput) -> np.ndarray:
    return np.array(tuple(inp.b) + (inp.xi,), dtype=float)


def root_pair_coeff_map(inp: RootPairMapInput) -> np.ndarray:
    """Coefficients ``(a_0, ..., a_{n-1})`` of ``(x-alpha)(x-beta) g(x)``.

    ``g(x) = xi x^{n-2} + b_{n-3} x^{n-3} + ... + b_0``; the product has
    leading coefficient ``xi``, which is dropped from the result.
    """
    g = _cofactor(inp)
    quad = np.array([inp.alpha * inp.beta, -(inp.alpha + inp.beta), 1.0])
    prod = np.convolve(quad, g)
    return prod[:-1]


def cofactor_value(inp: RootPairMapInput, x: float) -> float:
    acc = 0.0
    for c in reversed(_cofactor(inp)):
        acc = acc * x + c
    return acc


def jacobian_reference(inp: RootPairMapInput) -> float:
    """Closed form ``(beta - alpha) g(alpha) g(beta)`` of the Jacobian determinant."""
    if inp.n == 2:
        return inp.xi ** 2 * (inp.beta - inp.alpha)
    return (inp.beta - inp.alpha) * cofactor_value(inp, inp.alpha) * cofactor_value(inp, inp.beta)


def finite_difference_jacobian(inp: RootPairMapInput, step: float = 1e-6) -> float:
    """Determinant of the central-difference Jacobian of :func:`root_pair_coeff_map`.

    Rows follow ``(a_{n-1}, ..., a_0)`` and columns ``(b_{n-3}, ..., b_0, alpha, beta)``;
    that orientation fixes the sign of the determinant.
    """
    n = inp.n
    params = np.array(tuple(inp.b[::-1]) + (inp.alpha, inp.beta), dtype=float)

    def coeffs(v: np.ndarray) -> np.ndarray:
        b = tuple(v[: n - 2][::-1])
        out = root_pair_coeff_map(RootPairMapInput(inp.xi, b, v[n - 2], v[n - 1]))
        return out[::-1]

    jac = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = step
        jac[:, j] = (coeffs(params + e) - coeffs(params - e)) / (2 * step)
    return float(np.linalg.det(jac))
