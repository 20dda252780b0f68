"""Irreducibility of monic integer polynomials over Q and reducible counts.

A monic integer polynomial is reducible over Q exactly when it splits into two
monic integer factors of positive degree (Gauss's lemma), so the search below
only looks for monic integer factors of degree ``d <= n/2``:

* ``d = 1``: rational-root test, the root must divide ``a_0``;
* ``d >= 2``: a monic factor ``g`` of degree ``d`` takes, at each integer
  sample point ``x_j``, a nonzero value dividing ``p(x_j)``.  Choosing one
  signed divisor per point fixes ``g`` by interpolation, so enumerating the
  divisor tuples covers every candidate.  Candidates with non-integer
  coefficients or coefficients outside the Mahler box are dropped before
  trial division.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import divisors as _sympy_divisors

from . import intpoly
from .intpoly import Poly
from .poly import MonicIntPoly, box_size, enumerate_coeffs

DEFAULT_BUDGET = 50_000_000
BUDGET_ENV = "ALGCENSUS_BUDGET"


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(
            f"enumeration needs {required} polynomials but the budget is {budget}; "
            f"raise it with --budget or ${BUDGET_ENV}"
        )
        self.required = required
        self.budget = budget


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


def check_budget(n: int, Q: int, budget: int | None) -> int:
    budget = default_budget() if budget is None else budget
    required = box_size(n, Q)
    if required > budget:
        raise BudgetExceeded(required, budget)
    return required


@dataclass(frozen=True)
class FactorWitness:
    left: MonicIntPoly
    right: MonicIntPoly

    def product(self) -> MonicIntPoly:
        return MonicIntPoly.from_full(intpoly.mul(self.left.full, self.right.full))


@lru_cache(maxsize=65536)
def signed_divisors(v: int) -> tuple[int, ...]:
    ds = _sympy_divisors(abs(v))
    return tuple(ds) + tuple(-d for d in ds)


@lru_cache(maxsize=None)
def _interp_rows(d: int) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...], int]:
    """Sample points and a scaled inverse Vandermonde matrix for degree ``d``.

    Returns ``(xs, rows, den)`` with ``den * V^-1 = rows`` as integers, where
    ``V[j][k] = xs[j]**k`` for ``k < d``.
    """
    xs = [0]
    k = 1
    while len(xs) < d:
        xs.extend((k, -k))
        k += 1
    xs = tuple(xs[:d])
    vand = [[Fraction(x) ** k for k in range(d)] for x in xs]
    inv = _invert(vand)
    den = 1
    for row in inv:
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
    rows = tuple(tuple(int(v * den) for v in row) for row in inv)
    return xs, rows, den


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    size = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(m)]
    for col in range(size):
        piv = next(r for r in range(col, size) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def _linear_factor(full: Poly) -> Poly | None:
    a0 = full[0]
    if a0 == 0:
        return (0, 1)
    for r in signed_divisors(a0):
        if intpoly.evaluate(full, r) == 0:
            return (-r, 1)
    return None


def _factor_of_degree(full: Poly, d: int, bound: int) -> Poly | None:
    xs, rows, den = _interp_rows(d)
    values = [intpoly.evaluate(full, x) for x in xs]
    if any(v == 0 for v in values):
        # an integer root; the linear search owns that case
        return None
    shifts = [x ** d for x in xs]
    for choice in itertools.product(*(signed_divisors(v) for v in values)):
        rhs = [s - sh for s, sh in zip(choice, shifts)]
        coeffs = []
        for row in rows:
            num = sum(r * v for r, v in zip(row, rhs))
            q, rem = divmod(num, den)
            if rem or abs(q) > bound:
                break
            coeffs.append(q)
        else:
            g = tuple(coeffs) + (1,)
            quot, rem = intpoly.divmod_monic(full, g)
            if not rem:
                return g
    return None


def factor_coefficient_bound(full: Poly) -> int:
    """``2^n * sqrt(n+1) * H(p)``, a bound on coefficients of any monic factor."""
    n = len(full) - 1
    H = max(abs(c) for c in full)
    return math.floor(2 ** n * math.sqrt(n + 1) * H) + 1


def find_factor_full(full: Poly) -> tuple[Poly, Poly] | None:
    """A split ``full = left * right`` into monic integer factors, or ``None``."""
    n = len(full) - 1
    if n <= 1:
        return None
    lin = _linear_factor(full)
    if lin is not None:
        return lin, intpoly.divmod_monic(full, lin)[0]
    bound = factor_coefficient_bound(full)
    for d in range(2, n // 2 + 1):
        g = _factor_of_degree(full, d, bound)
        if g is not None:
            return g, intpoly.divmod_monic(full, g)[0]
    return None


def find_factor(p: MonicIntPoly) -> FactorWitness | None:
    split = find_factor_full(p.full)
    if split is None:
        return None
    left, right = (MonicIntPoly.from_full(f) for f in split)
    if left.degree > right.degree:
        left, right = right, left
    return FactorWitness(left, right)


def is_irreducible(p: MonicIntPoly) -> bool:
    return find_factor_full(p.full) is None


def is_irreducible_full(full: Poly) -> bool:
    return find_factor_full(full) is None


@dataclass(frozen=True)
class ReducibleCount:
    n: int
    Q: int
    count: int
    normalizer: float

    @property
    def ratio(self) -> float:
        return self.count / self.normalizer if self.normalizer else math.nan


def reducible_normalizer(n: int, Q: int) -> float:
    if n == 2:
        return 2 * Q * math.log(Q) if Q > 1 else math.nan
    return float(Q ** (n - 1))


def count_reducible_quadratic(Q: int) -> int:
    """Reducible ``x^2 + a_1 x + a_0`` in the height box via the discriminant.

    A monic quadratic splits over Z exactly when ``a_1^2 - 4 a_0`` is a
    perfect square; the test is vectorised over ``a_0`` for each ``a_1``.
    """
    a0 = np.arange(-Q, Q + 1, dtype=np.int64)
    total = 0
    for a1 in range(-Q, Q + 1):
        disc = a1 * a1 - 4 * a0
        ok = disc >= 0
        d = disc[ok]
        r = np.floor(np.sqrt(d.astype(np.float64))).astype(np.int64)
        # float sqrt can be off by one near perfect squares
        r = np.where((r + 1) * (r + 1) <= d, r + 1, r)
        r = np.where(r * r > d, r - 1, r)
        total += int(np.count_nonzero(r * r == d))
    return total


def count_reducible(n: int, Q: int, budget: int | None = None) -> ReducibleCount:
    """Exact number of reducible monic polynomials of degree ``n`` and height ``<= Q``."""
    if n < 1 or Q < 1:
        raise ValueError(f"need n >= 1 and Q >= 1, got n={n}, Q={Q}")
    check_budget(n, Q, budget)
    if n == 1:
        count = 0
    elif n == 2:
        count = count_reducible_quadratic(Q)
    else:
        count = sum(1 for c in enumerate_coeffs(n, Q) if find_factor_full(c + (1,)) is not None)
    return ReducibleCount(n, Q, count, reducible_normalizer(n, Q))
