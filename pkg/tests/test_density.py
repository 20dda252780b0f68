import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algcensus import density
from algcensus.density import DensityParams
from algcensus.poly import RatInterval

P = DensityParams()


def close(a, b, k=3.0):
    return abs(a.value - b.value) <= k * math.hypot(a.std_error, b.std_error)


def test_phi_examples():
    assert density.phi(1, 2.0).value == 0.25
    assert density.phi(2, 0.0).value == 2.0
    a = density.phi(2, 10.0, P, method="quadrature")
    b = density.phi(2, 0.1, P, method="quadrature")
    assert abs(a.value - b.value / 100) <= 3 * math.hypot(a.std_error, b.std_error / 100)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("t", [0.05, 0.2, density.SERIES_EDGE * 0.999])
def test_series_zone_matches_quadrature(n, t):
    assert close(density.phi(n, t, P), density.phi(n, t, P, method="quadrature"))


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("t", [density.RECIPROCAL_EDGE * 1.001, 5.0, 12.0])
def test_reciprocal_zone_matches_quadrature(n, t):
    assert close(density.phi(n, t, P), density.phi(n, t, P, method="quadrature"))


@pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 1.7, 3.0, -2.5])
def test_phi1_quadrature(t):
    assert close(density.phi(1, t, P), density.phi(1, t, P, method="quadrature"))


def test_omega_xi_zero_aliases_phi():
    for n in (2, 3):
        for t in (0.0, 0.4, 1.3, 6.0):
            assert density.omega(n, 0.0, t, P) == density.phi(n - 1, t, P)


def test_omega_examples():
    assert density.omega(3, 0.01, 150.0, P).value == 0.0
    assert density.omega(2, 0.01, 50.0, P).value == pytest.approx(0.02, abs=1e-12)


def test_omega2_closed_examples():
    assert density.omega2_closed(0.01, 0.0).value == 1.0
    assert density.omega2_closed(0.01, 50.0).value == pytest.approx(0.02)
    assert density.omega2_closed(0.01, 200.0).value == 0.0
    bp = density.Omega2Breakpoints.at(0.01)
    assert bp.t5 == pytest.approx(100.99, abs=0.01)
    with pytest.raises(ValueError):
        density.omega2_closed(0.3, 1.0)


@pytest.mark.parametrize("xi", [0.25, 0.1, 0.01])
def test_omega2_closed_continuous(xi):
    bp = density.Omega2Breakpoints.at(xi)
    for t in (bp.t1, bp.t2, bp.t3, bp.t4, bp.t5):
        left = density.omega2_closed(xi, t * (1 - 1e-12)).value
        right = density.omega2_closed(xi, t * (1 + 1e-12)).value
        assert left == pytest.approx(right, abs=1e-9)


@pytest.mark.parametrize("xi", [0.1, 0.01])
def test_omega2_numeric_agreement(xi):
    for t in (0.0, 0.5, 1.0, 2.0, 5.0, 0.5 / math.sqrt(xi), 2 / math.sqrt(xi), 0.9 / xi, 1.5 / xi):
        assert close(density.omega(2, xi, t, P), density.omega2_closed(xi, t))


def test_delta_tilde_examples():
    assert density.delta_tilde(2, 0.04, 3.0) == pytest.approx(0.0144)
    assert density.delta_tilde(3, 0.01, 0.0) == 0.0
    assert density.delta_tilde(3, 0.01, 10.0) == pytest.approx(0.02)
    assert density.delta_tilde(3, 0.01, 10.0 + 1e-9) == pytest.approx(0.02)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 6), st.floats(1e-4, 1.0), st.floats(-1e4, 1e4))
def test_delta_tilde_even(n, xi, t):
    assert density.delta_tilde(n, xi, t) == density.delta_tilde(n, xi, -t)


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("xi", [0.2, 0.01])
def test_delta_tilde_seams(n, xi):
    r = xi ** -0.5
    a = density.delta_tilde(n, xi, r * (1 - 1e-12))
    b = density.delta_tilde(n, xi, r * (1 + 1e-12))
    assert a == pytest.approx(b, abs=1e-9)
    # the formula drops by 2^(n-1) xi at |t| = 1/xi
    a = density.delta_tilde(n, xi, 1 / xi)
    b = density.delta_tilde(n, xi, 1 / xi * (1 + 1e-12))
    assert a - b == pytest.approx(2 ** (n - 1) * xi, rel=1e-6)


def test_integral_delta_tilde():
    assert density.integral_delta_tilde(2, 0.01) == pytest.approx(4 * (1 - 2 / 15), rel=1e-12)
    assert density.integral_delta_tilde(3, 1e-12) == pytest.approx(8, rel=1e-5)
    from algcensus.verify import delta_tilde_quadrature

    assert abs(density.integral_delta_tilde(2, 0.01) - delta_tilde_quadrature(2, 0.01)) < 1e-6


def test_antiderivative_consistent():
    for n, xi in ((2, 0.01), (4, 0.2)):
        for t in (0.5, 5.0, 30.0, 400.0):
            ref = density.integrate_piecewise(lambda s: density.delta_tilde(n, xi, s), 0.0, t, [xi ** -0.5, 1 / xi])
            assert density.delta_tilde_antiderivative(n, xi, t) == pytest.approx(ref, abs=1e-9)
        T = 1e9
        total = 2 * density.delta_tilde_antiderivative(n, xi, T) - 2 * 2 ** (n - 2) / T
        assert total == pytest.approx(density.integral_delta_tilde(n, xi), abs=1e-9)


def test_predicted_count_examples():
    plateau = density.predicted_count(2, 100, RatInterval(20, 80))
    assert plateau == pytest.approx(12000, rel=0.02)
    # beyond Q + 1 only the t^-4 residue of phi_2 - 2 t^-2 is left
    tail = density.predicted_count(3, 10, RatInterval(12, 20))
    assert tail == pytest.approx(1000 * 8 / 9 * (12.0 ** -3 - 20.0 ** -3), rel=1e-6)
    assert tail < 1
    near = [density.predicted_count(2, Q, RatInterval(0, 1)) / Q ** 2 for Q in (10, 100, 1000)]
    assert abs(near[-1] - 1) < abs(near[0] - 1)
    with pytest.raises(ValueError):
        density.predicted_count(2, 1, RatInterval(0, 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_plateau_value(n):
    xi = 0.01
    for t in np.linspace(xi ** -0.5 + 1, 1 / xi - 2, 4):
        v = density.omega(n, xi, float(t), P)
        assert abs(v.value - 2 ** (n - 1) * xi) <= 3 * v.std_error + 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_vanishing(n):
    for xi in (0.1, 0.01):
        for t in (1 / xi + 1, 2 / xi):
            assert density.omega(n, xi, t, P).value == 0.0


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.floats(-8, 8))
def test_values_nonnegative(n, t):
    v = density.phi(n, t, P)
    assert v.value >= 0 and v.std_error >= 0


@pytest.mark.parametrize("n", [2, 3])
def test_evenness_and_inversion(n):
    for t in np.linspace(0.1, 0.9, 20):
        a = density.phi(n, float(t), P, method="quadrature")
        b = density.phi(n, -float(t), P, method="quadrature")
        assert close(a, b)
        c = density.phi(n, 1 / float(t), P, method="quadrature")
        assert abs(t * t * a.value - c.value) <= 3 * math.hypot(t * t * a.std_error, c.std_error)


def test_monte_carlo_agreement_and_determinism():
    rng = np.random.default_rng(3)
    for n in (2, 3, 4):
        for t in rng.uniform(-3, 3, size=3):
            q = density.phi(n, float(t), P, method="quadrature")
            m = density.phi(n, float(t), P, method="monte_carlo")
            assert close(q, m)
    a = density.phi(3, 0.7, DensityParams(seed=5), method="monte_carlo")
    b = density.phi(3, 0.7, DensityParams(seed=5), method="monte_carlo")
    assert a == b


def test_quadrature_deterministic_per_seed():
    a = density.phi(3, 0.8, DensityParams(seed=1), method="quadrature")
    b = density.phi(3, 0.8, DensityParams(seed=1), method="quadrature")
    c = density.phi(3, 0.8, DensityParams(seed=2), method="quadrature")
    assert a == b and a != c


def test_params_validation():
    with pytest.raises(ValueError):
        DensityParams(grid=4)
    with pytest.raises(ValueError):
        DensityParams(shifts=1)
    with pytest.raises(ValueError):
        density.phi(0, 1.0)
    with pytest.raises(ValueError):
        density.omega(2, 1.5, 1.0)


def test_close_roots_counts_only_pairs():
    # x^2 - 1/4 has two roots in [-1, 1); x^2 - x/2 - 3/2 has one (-1), the other is 3/2
    rows = np.array([[-0.25, 0.0], [-1.5, -0.5]])
    counts = density.count_roots_in_batch(rows, 1.0, -1.0, 1.0)
    assert list(counts) == [2, 1]


def test_close_roots_far_interval_smaller():
    h = Fraction(1, 4)
    near = density.close_roots_measure(3, 0.05, RatInterval(-h / 2, h / 2), 200_000, 0)
    far = density.close_roots_measure(3, 0.05, RatInterval(30 - h / 2, 30 + h / 2), 200_000, 0)
    assert far.value <= near.value


def test_close_roots_preconditions():
    with pytest.raises(ValueError):
        density.close_roots_measure(3, 0.05, RatInterval(0, 2), 1000, 0)
    with pytest.raises(ValueError):
        density.close_roots_measure(3, 0.0, RatInterval(0, 1), 1000, 0)
