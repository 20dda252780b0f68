"""Exact real-root counting and isolation with Sturm chains, plus Perron tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import intpoly
from .intpoly import Poly, hom_eval
from .poly import MonicIntPoly, RatInterval, height

# numerical margins below this are treated as ties in the Perron test
PERRON_TIE_TOL = 1e-9


def squarefree_part(p: MonicIntPoly) -> MonicIntPoly:
    """``p / gcd(p, p')``.  For monic ``p`` the result is monic again."""
    full = p.full
    g = intpoly.gcd(full, intpoly.derivative(full))
    if len(g) == 1:
        return p
    return MonicIntPoly.from_full(intpoly.exact_div(full, g))


@dataclass(frozen=True)
class SturmChain:
    chain: tuple[Poly, ...]

    @classmethod
    def build(cls, full: Sequence[int]) -> "SturmChain":
        """Chain of a squarefree integer polynomial given as full coefficients."""
        return cls(sturm_sequence(tuple(full)))

    @classmethod
    def of(cls, p: MonicIntPoly) -> "SturmChain":
        return cls.build(squarefree_part(p).full)

    @property
    def poly(self) -> Poly:
        return self.chain[0]

    def variations(self, x: Fraction) -> int:
        return sign_variations(self.chain, x.numerator, x.denominator)

    def variations_at_infinity(self, positive: bool = True) -> int:
        return _variations_inf(self.chain, positive)

    def count_half_open(self, lo: Fraction, hi: Fraction) -> int:
        """Distinct roots in ``[lo, hi)``."""
        p = self.chain[0]
        n = self.variations(lo) - self.variations(hi)
        if hom_eval(p, lo.numerator, lo.denominator) == 0:
            n += 1
        if hom_eval(p, hi.numerator, hi.denominator) == 0:
            n -= 1
        return n

    def count_total(self) -> int:
        return self.variations_at_infinity(False) - self.variations_at_infinity(True)


def sturm_sequence(p: Poly) -> tuple[Poly, ...]:
    """Signed remainder sequence with each element made primitive.

    Content is stripped with a positive divisor only, so sign variations are
    unchanged relative to the classical chain.
    """
    p = intpoly.trim(p)
    seq = [p]
    if intpoly.degree(p) <= 0:
        return tuple(seq)
    d = intpoly.derivative(p)
    g = intpoly.content(d)
    seq.append(tuple(c // g for c in d))
    while intpoly.degree(seq[-1]) > 0:
        r = intpoly.prem_abs(seq[-2], seq[-1])
        if not r:
            break
        g = intpoly.content(r)
        seq.append(tuple(-c // g for c in r))
    return tuple(seq)


def sign_variations(chain: Sequence[Poly], a: int, b: int) -> int:
    """Sign changes of the chain at ``a/b`` (``b > 0``), zeros skipped."""
    count = 0
    last = 0
    for s in chain:
        v = hom_eval(s, a, b)
        if v:
            if last and (v > 0) != (last > 0):
                count += 1
            last = v
    return count


def _variations_inf(chain: Sequence[Poly], positive: bool) -> int:
    count = 0
    last = 0
    for s in chain:
        v = s[-1]
        if not positive and (len(s) - 1) % 2 == 1:
            v = -v
        if last and (v > 0) != (last > 0):
            count += 1
        last = v
    return count


def root_bound(p: MonicIntPoly) -> int:
    """Every real root lies strictly inside ``(-1 - H, 1 + H)`` (Cauchy)."""
    return 1 + height(p)


def count_roots_in(p: MonicIntPoly, interval: RatInterval) -> int:
    """Number of distinct real roots of ``p`` in the half-open ``interval``."""
    return SturmChain.of(p).count_half_open(interval.lo, interval.hi)


@dataclass(frozen=True)
class RootBox:
    interval: RatInterval
    poly: MonicIntPoly

    @property
    def midpoint(self) -> float:
        return float((self.interval.lo + self.interval.hi) / 2)

    def to_json(self) -> dict[str, str]:
        return self.interval.to_json()


def isolate_roots(
    p: MonicIntPoly, eps: Fraction, within: RatInterval | None = None
) -> list[RootBox]:
    """Disjoint boxes of width ``<= eps``, one per distinct real root.

    Bisection starts from ``[-1-H, 1+H)``, or from its intersection with
    ``within`` if given (then only roots inside ``within`` are returned).
    Boxes come back in increasing order.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    q = squarefree_part(p)
    chain = SturmChain.build(q.full)
    bound = root_bound(q)
    lo, hi = Fraction(-bound), Fraction(bound)
    if within is not None:
        lo, hi = max(lo, within.lo), min(hi, within.hi)
        if lo >= hi:
            return []
    boxes: list[RootBox] = []
    stack = [(lo, hi, chain.count_half_open(lo, hi))]
    while stack:
        a, b, k = stack.pop()
        if k == 0:
            continue
        if k == 1 and b - a <= eps:
            boxes.append(RootBox(RatInterval(a, b), q))
            continue
        m = (a + b) / 2
        left = chain.count_half_open(a, m)
        # right half first so the final list is ascending after pops
        stack.append((m, b, k - left))
        stack.append((a, m, left))
    return boxes


def refine_box(box: RootBox, eps: Fraction) -> RootBox:
    """Shrink an isolating box by bisection until its width is ``<= eps``."""
    chain = SturmChain.build(box.poly.full)
    a, b = box.interval.lo, box.interval.hi
    while b - a > eps:
        m = (a + b) / 2
        if chain.count_half_open(a, m):
            b = m
        else:
            a = m
    return RootBox(RatInterval(a, b), box.poly)


@dataclass(frozen=True)
class PerronVerdict:
    is_perron: bool
    certified_by_bound: bool
    margin: float
    indeterminate: bool = False
    # the exact bound certified Perron but the numerical conjugates disagree
    contradiction: bool = False


def perron_threshold(n: int, H: int) -> float:
    return (n + 1) ** 0.25 * math.sqrt(H)


def exceeds_perron_bound(x: Fraction, n: int, H: int) -> bool:
    """Exact test of ``x > (n+1)^(1/4) H^(1/2)``."""
    return x > 0 and x ** 4 > (n + 1) * H * H


def _is_parity_symmetric(full: Poly) -> bool:
    """``p(-x) = +-p(x)``, i.e. ``-alpha`` is a conjugate of every root ``alpha``."""
    d = len(full) - 1
    return all(c == 0 for k, c in enumerate(full) if (d - k) % 2 == 1)


def classify_perron(
    p: MonicIntPoly, alpha_box: RootBox, roots: np.ndarray | None = None
) -> PerronVerdict:
    """Decide whether the root isolated by ``alpha_box`` is a Perron number.

    ``p`` must be irreducible.  The exact sufficient bound is checked on the
    box's lower endpoint; the general answer compares ``alpha`` with the
    numerically computed conjugate moduli.  Near-ties are settled exactly
    when ``-alpha`` is a conjugate, deferred to the bound otherwise, and
    flagged as indeterminate when neither applies.
    """
    n = p.degree
    H = height(p)
    certified = exceeds_perron_bound(alpha_box.interval.lo, n, H)
    if n == 1:
        return PerronVerdict(True, certified, math.inf)
    if roots is None:
        roots = np.roots(np.asarray(p.full[::-1], dtype=float))
    mid = alpha_box.midpoint
    idx = int(np.argmin(np.abs(roots - mid)))
    alpha = float(roots[idx].real)
    others = np.delete(roots, idx)
    margin = alpha - float(np.max(np.abs(others)))
    if abs(margin) >= PERRON_TIE_TOL * max(1.0, abs(alpha)):
        numeric = margin > 0
        if certified and not numeric:
            return PerronVerdict(True, True, margin, contradiction=True)
        return PerronVerdict(numeric, certified, margin)
    if _is_parity_symmetric(p.full):
        return PerronVerdict(False, certified, margin, contradiction=certified)
    if certified:
        return PerronVerdict(True, True, margin)
    return PerronVerdict(False, False, margin, indeterminate=True)
