import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algcensus.irreducible import is_irreducible
from algcensus.poly import MonicIntPoly, RatInterval, enumerate_monic
from algcensus.roots import (
    SturmChain,
    classify_perron,
    count_roots_in,
    isolate_roots,
    refine_box,
    root_bound,
    squarefree_part,
)
from oracles import scan_count, sign_scan_count

monic = st.lists(st.integers(-6, 6), min_size=1, max_size=5).map(lambda c: MonicIntPoly(tuple(c)))
rats = st.builds(Fraction, st.integers(-80, 80), st.integers(1, 12))


def P(*desc):
    return MonicIntPoly(tuple(reversed(desc)))


@pytest.mark.parametrize(
    "p,q", [(P(-2, 1), P(-1)), (P(0, -2), P(0, -2)), (P(-1, 0, 0), P(-1, 0))]
)
def test_squarefree_part(p, q):
    assert squarefree_part(p) == q


@pytest.mark.parametrize(
    "p,I,k",
    [
        (P(0, -2), RatInterval(1, 2), 1),
        (P(0, 1), RatInterval(-10, 10), 0),
        (P(-1), RatInterval(1, 2), 1),
        (P(-1), RatInterval(0, 1), 0),
    ],
)
def test_count_roots_examples(p, I, k):
    assert count_roots_in(p, I) == k


@pytest.mark.parametrize(
    "p,roots",
    [
        (P(0, -2), [-math.sqrt(2), math.sqrt(2)]),
        (P(-1, -1), [(1 - math.sqrt(5)) / 2, (1 + math.sqrt(5)) / 2]),
        (P(0, 0, -2), [2 ** (1 / 3)]),
    ],
)
def test_isolate_roots_examples(p, roots):
    eps = Fraction(1, 1024)
    boxes = isolate_roots(p, eps)
    assert len(boxes) == len(roots)
    for box, r in zip(boxes, roots):
        assert box.interval.width <= eps
        assert box.interval.lo <= r < box.interval.hi


def test_sturm_matches_sign_scan():
    # every monic polynomial with n <= 3 and Q <= 5, on the whole root range
    for n in (1, 2, 3):
        for p in enumerate_monic(n, 5):
            q = squarefree_part(p)
            B = root_bound(p)
            I = RatInterval(-B, B)
            assert count_roots_in(p, I) == sign_scan_count(q.full, -B, B), p


@settings(max_examples=150, deadline=None)
@given(monic, rats, rats)
def test_count_matches_sympy_real_roots(p, a, b):
    if a == b:
        return
    lo, hi = min(a, b), max(a, b)
    assert count_roots_in(p, RatInterval(lo, hi)) == scan_count(p.full, lo, hi)


@settings(max_examples=150, deadline=None)
@given(monic, rats, rats, rats)
def test_additivity(p, a, b, c):
    a, b, c = sorted((a, b, c))
    if not a < b < c:
        return
    chain = SturmChain.of(p)
    assert chain.count_half_open(a, b) + chain.count_half_open(b, c) == chain.count_half_open(a, c)


@settings(max_examples=100, deadline=None)
@given(monic)
def test_isolation_within_root_bound(p):
    B = root_bound(p)
    boxes = isolate_roots(p, Fraction(1, 64))
    assert len(boxes) == SturmChain.of(p).count_total()
    for box in boxes:
        assert -B <= box.interval.lo and box.interval.hi <= B
    for a, b in zip(boxes, boxes[1:]):
        assert a.interval.hi <= b.interval.lo


def test_refine_box():
    box = isolate_roots(P(0, -2), Fraction(1, 4))[1]
    fine = refine_box(box, Fraction(1, 10 ** 9))
    assert abs(fine.midpoint - math.sqrt(2)) < 1e-9


def _top_box(p):
    return isolate_roots(p, Fraction(1, 1 << 20))[-1]


def test_perron_golden_ratio():
    v = classify_perron(P(-1, -1), _top_box(P(-1, -1)))
    assert v.is_perron and v.certified_by_bound and not v.indeterminate


def test_perron_sqrt3_tie_resolved_exactly():
    v = classify_perron(P(0, -3), _top_box(P(0, -3)))
    assert not v.is_perron and not v.indeterminate and not v.certified_by_bound


def test_perron_certified_large_root():
    p = P(-5, 1)
    box = _top_box(p)
    assert abs(box.midpoint - (5 + math.sqrt(21)) / 2) < 1e-5
    v = classify_perron(p, box)
    assert v.is_perron and v.certified_by_bound


def test_perron_negative_root_not_perron():
    p = P(-1, -1)
    low = isolate_roots(p, Fraction(1, 1 << 20))[0]
    assert not classify_perron(p, low).is_perron


def test_certificate_soundness_over_box():
    # whenever the bound certifies, the numerical conjugates agree
    for p in enumerate_monic(3, 3):
        if not is_irreducible(p):
            continue
        boxes = isolate_roots(p, Fraction(1, 1 << 24))
        if not boxes:
            continue
        v = classify_perron(p, boxes[-1])
        assert not v.contradiction
        if v.certified_by_bound:
            roots = np.roots(np.asarray(p.full[::-1], dtype=float))
            alpha = boxes[-1].midpoint
            others = roots[np.argsort(np.abs(roots - alpha))[1:]]
            assert np.all(np.abs(others) < alpha)
