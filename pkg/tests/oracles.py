"""Independent reference implementations used by the tests."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import sympy

X = sympy.Symbol("x")


def quadratic_census(Q: int, lo: float, hi: float) -> int:
    """Real roots in ``[lo, hi)`` of irreducible ``x^2 + b x + c``, height ``<= Q``.

    Irreducible monic quadratics are exactly those whose discriminant is not
    a perfect square; their roots come from the quadratic formula.
    """
    count = 0
    for b in range(-Q, Q + 1):
        for c in range(-Q, Q + 1):
            d = b * b - 4 * c
            if d <= 0 or math.isqrt(d) ** 2 == d:
                continue
            for s in (1.0, -1.0):
                x = (-b + s * math.sqrt(d)) / 2.0
                if lo <= x < hi:
                    count += 1
    return count


def reducible_quadratics_by_pairs(Q: int) -> int:
    """``#{(r, s) unordered : |r + s| <= Q, |r s| <= Q}``, i.e. ``(x - r)(x - s)`` in the box."""
    seen = set()
    for r in range(-Q - 1, Q + 2):
        for s in range(r, Q + 2):
            if abs(r + s) <= Q and abs(r * s) <= Q:
                seen.add((r, s))
    return len(seen)


def sympy_irreducible(full: tuple[int, ...]) -> bool:
    expr = sum(c * X ** k for k, c in enumerate(full))
    _, factors = sympy.factor_list(expr)
    return len(factors) == 1 and factors[0][1] == 1


def scan_count(full: tuple[int, ...], lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in ``[lo, hi)`` from sympy's exact real roots."""
    expr = sympy.Poly(list(reversed(full)), X)
    roots = set(sympy.real_roots(expr))
    return sum(1 for r in roots if sympy.Rational(lo.numerator, lo.denominator) <= r < sympy.Rational(hi.numerator, hi.denominator))


def sign_scan_count(full: tuple[int, ...], lo: float, hi: float, step: float = 1e-4) -> int:
    """Sign changes of a squarefree ``p`` on a fine grid over ``[lo, hi]``.

    Simple roots always flip the sign; grid points that hit a root exactly
    are dropped, so they are counted once through the flip around them.
    """
    xs = np.arange(lo, hi + step / 2, step)
    vals = np.polyval(np.asarray(full[::-1], dtype=float), xs)
    s = np.sign(vals)
    nz = s[s != 0]
    return int(np.count_nonzero(nz[1:] != nz[:-1]))
