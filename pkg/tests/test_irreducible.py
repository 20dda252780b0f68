import pytest
from hypothesis import given, settings, strategies as st

from algcensus import intpoly
from algcensus.irreducible import (
    BudgetExceeded,
    check_budget,
    count_reducible,
    count_reducible_quadratic,
    factor_coefficient_bound,
    find_factor,
    is_irreducible,
)
from algcensus.poly import MonicIntPoly, enumerate_monic
from oracles import reducible_quadratics_by_pairs, sympy_irreducible


def P(*desc):
    return MonicIntPoly(tuple(reversed(desc)))


def test_examples():
    assert is_irreducible(P(0, -2))
    w = find_factor(P(0, -1))
    assert w is not None and w.product() == P(0, -1)
    assert {w.left.coeffs, w.right.coeffs} == {(-1,), (1,)}
    assert is_irreducible(P(0, 1, 1))


@pytest.mark.parametrize("n,Q", [(1, 3), (2, 4), (3, 3), (4, 2), (5, 1)])
def test_matches_sympy_exhaustively(n, Q):
    for p in enumerate_monic(n, Q):
        assert is_irreducible(p) == sympy_irreducible(p.full), p


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-12, 12), min_size=4, max_size=6))
def test_matches_sympy_random(coeffs):
    p = MonicIntPoly(tuple(coeffs))
    assert is_irreducible(p) == sympy_irreducible(p.full)


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.integers(-5, 5), min_size=2, max_size=3),
    st.lists(st.integers(-5, 5), min_size=2, max_size=3),
)
def test_products_are_found(a, b):
    f, g = tuple(a) + (1,), tuple(b) + (1,)
    p = MonicIntPoly.from_full(intpoly.mul(f, g))
    w = find_factor(p)
    assert w is not None
    assert w.product() == p


def test_witness_soundness_box():
    for p in enumerate_monic(4, 2):
        w = find_factor(p)
        if w is not None:
            assert w.product() == p
            assert 1 <= w.left.degree <= w.right.degree


def test_integer_root_rule_for_low_degree():
    for n in (2, 3):
        for p in enumerate_monic(n, 10 if n == 2 else 6):
            a0 = p.coeffs[0]
            has_root = a0 == 0 or any(p(r) == 0 for r in range(-abs(a0), abs(a0) + 1) if r and a0 % r == 0)
            assert is_irreducible(p) == (not has_root)


def test_factor_bound_covers_true_factors():
    for p in enumerate_monic(4, 2):
        w = find_factor(p)
        if w is None:
            continue
        bound = factor_coefficient_bound(p.full)
        for f in (w.left, w.right):
            assert max(abs(c) for c in f.full) <= bound


def test_reducible_counts():
    assert count_reducible(2, 1).count == 4
    assert count_reducible(1, 9).count == 0
    for Q in (1, 2, 5, 13, 30):
        assert count_reducible_quadratic(Q) == reducible_quadratics_by_pairs(Q)
        brute = sum(1 for p in enumerate_monic(2, Q) if not is_irreducible(p))
        assert count_reducible(2, Q).count == brute


def test_reducible_monotone():
    for n, Qs in ((2, range(1, 25)), (3, range(1, 5))):
        counts = [count_reducible(n, Q).count for Q in Qs]
        assert counts == sorted(counts)


def test_reducible_ratio_trend():
    r200 = count_reducible(2, 200).ratio
    r2000 = count_reducible(2, 2000).ratio
    assert 0.6 <= r2000 <= 1.4
    assert abs(r2000 - 1) < abs(r200 - 1)
    assert count_reducible(3, 2).normalizer == 4


def test_budget():
    assert check_budget(2, 3, 100) == 49
    with pytest.raises(BudgetExceeded) as exc:
        count_reducible(3, 5, budget=100)
    assert exc.value.required == 1331
    assert "1331" in str(exc.value)


def test_budget_environment(monkeypatch):
    monkeypatch.setenv("ALGCENSUS_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        check_budget(2, 2, None)
