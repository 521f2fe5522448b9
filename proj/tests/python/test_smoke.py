import cmath
import math

import pytest

import sparsewave as sw


def ball_closed_form(k):
    return (cmath.sin(k) - k * cmath.cos(k)) / k**3


def test_free_amplitude_matches_closed_form():
    for k in (1.0 + 0.3j, 0.5 + 0.0j, 2.0 + 1.0j):
        got = sw.free_amplitude_ball(k)
        assert abs(got - ball_closed_form(k)) < 1e-10 * abs(ball_closed_form(k))


def test_radial_amplitude_reduces_to_free_case():
    k = 1.0 + 0.3j
    assert abs(sw.radial_amplitude([], [], k) - sw.free_amplitude_ball(k)) < 1e-9


def test_wkb_exponent_vanishes_without_shells():
    assert sw.wkb_exponent([], [], 1.0 + 0.3j) == 0


def test_o_t_eigenvalue_m0():
    k, t = 1.0 + 0.5j, 7.0
    expect = (cmath.exp(2j * k * t) - 1.0) / (2j * k)
    assert abs(sw.o_t_eigenvalue(0, t, k) - expect) < 1e-12


def test_parametrix_residual_m0_decay():
    k = 1.0 + 0.5j
    assert sw.parametrix_residual(0, 100.0, k) == pytest.approx(math.exp(-100.0), rel=1e-9)


def test_sparseness_accepts_fast_schedule():
    # ln R = 20 followed by ln R' = 1.6 e^{20} satisfies every spacing
    # condition with room above the strict alpha threshold
    assert sw.sparseness_ok([20.0, 1.6 * math.exp(20.0)], alpha=1.5)
    assert not sw.sparseness_ok([20.0, 21.0], alpha=1.5)


def test_poly_exp_max_value():
    assert sw.poly_exp_max(1.0, 1.0) == pytest.approx(1.0 / math.e, abs=1e-15)


def test_affine_iteration_bound_dominates():
    a = [1.3, 0.2, 1.9]
    b = [0.4, 0.0, 1.0]
    x0 = 0.5
    x, worst = x0, x0
    for aj, bj in zip(a, b):
        x = aj * x + bj
        worst = max(worst, x)
    assert worst <= sw.affine_iteration_bound(a, b, x0)


def test_absence_margins_positive_and_increasing():
    rows, all_ok, increasing = sw.absence_margins(1.0, 1.0, log_R0=120.0, beta=1.4, count=3)
    assert all_ok and increasing
    assert [r[0] for r in rows] == [0, 1, 2]
    assert all(r[2] for r in rows)


def test_invalid_input_maps_to_value_error():
    with pytest.raises(ValueError):
        sw.poly_exp_max(-1.0, 1.0)
