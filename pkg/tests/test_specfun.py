import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conebound import DomainError, PoleError
from conebound.specfun import (
    EULER_GAMMA,
    BesselOrder,
    bessel_i,
    bessel_i_deriv,
    bessel_k,
    bessel_k_deriv,
    bessel_k_imag,
    bessel_k_imag_deriv,
    gamma_fn,
    k_small_x,
    log_deriv_k,
)


def test_gamma_examples(reference):
    assert gamma_fn(1.0) == 1.0
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    for x, value in reference["gamma"].items():
        assert gamma_fn(float(x)) == pytest.approx(value, rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -3.0, math.nan])
def test_gamma_poles(x):
    with pytest.raises(DomainError):
        gamma_fn(x)


def test_euler_constant():
    assert EULER_GAMMA == float(oracles.EULER)


def test_half_order_closed_form():
    assert bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) / math.e, rel=1e-14)
    for x in np.geomspace(0.01, 30, 25):
        exact = math.sqrt(math.pi / (2 * x)) * math.exp(-x)
        assert abs(bessel_k(0.5, x) - exact) <= 1e-12 * exact


def test_real_order_against_oracle(reference):
    for row in reference["bessel_k"]:
        assert bessel_k(row["nu"], row["x"]) == pytest.approx(row["k"], rel=1e-13)
        assert bessel_k_deriv(row["nu"], row["x"]) == pytest.approx(row["dk"], rel=1e-12)
    for row in reference["bessel_i"]:
        assert bessel_i(row["nu"], row["x"]) == pytest.approx(row["i"], rel=1e-13)


def test_wronskian_example():
    nu, x = 0.3, 2.0
    w = bessel_i(nu, x) * bessel_k_deriv(nu, x) - bessel_i_deriv(nu, x) * bessel_k(nu, x)
    assert w == pytest.approx(-0.5, abs=1e-14)


@given(st.floats(min_value=0.0, max_value=3.0), st.floats(min_value=0.05, max_value=40.0))
def test_k_positive_and_decreasing(nu, x):
    assert bessel_k(nu, x) > 0
    assert bessel_k_deriv(nu, x) < 0
    assert bessel_k(nu, x * 1.01) < bessel_k(nu, x)


@pytest.mark.parametrize("nu,x", [(0.5, 0.0), (0.5, -1.0), (6.0, 1.0), (-0.1, 1.0)])
def test_real_order_domain(nu, x):
    with pytest.raises(DomainError):
        bessel_k(nu, x)


def test_imaginary_order_against_oracle(reference):
    for row in reference["bessel_k_imag"]:
        assert abs(bessel_k_imag(row["nu"], row["x"]) - row["k"]) <= 1e-8 * max(1.0, abs(row["k"]))


def test_imaginary_order_continuity_at_zero():
    assert bessel_k_imag(1e-12, 1.0) == pytest.approx(bessel_k(0.0, 1.0), abs=1e-9)


def test_imaginary_order_derivative_by_finite_difference():
    for nu, x in [(0.5, 0.3), (1.0, 1.0), (0.8, 4.0)]:
        fd = oracles.finite_difference(lambda t: oracles.bessel_k_imag(nu, t), x)
        assert bessel_k_imag_deriv(nu, x) == pytest.approx(float(fd), rel=1e-8)


def test_imaginary_order_oscillates_near_origin():
    xs = np.geomspace(1e-6, 1e-1, 400)
    signs = np.sign([bessel_k_imag(2.0, x) for x in xs])
    assert np.count_nonzero(np.diff(signs)) >= 2


def test_small_x_form():
    xs = [1e-4, 1e-6, 1e-8]
    ratios = [k_small_x(0.25, x) * x**0.25 for x in xs]
    assert ratios[-1] == pytest.approx(ratios[-2], rel=1e-3)
    assert k_small_x(0.25, 1e-8) > k_small_x(0.25, 1e-4) > 0
    x = 1e-3
    assert abs(k_small_x(0.5, x) - bessel_k(0.5, x)) / bessel_k(0.5, x) < 10 * x
    with pytest.raises(DomainError):
        k_small_x(1.0, 0.1)
    with pytest.raises(DomainError):
        k_small_x(0.0, 0.1)


def test_log_deriv_examples():
    assert log_deriv_k(BesselOrder.real(0.5), 1.0) == pytest.approx(-1.5, rel=1e-14)
    assert log_deriv_k(BesselOrder.real(0.3), 50.0) == pytest.approx(-50.0, rel=0.05)
    # Finite difference of ln k_small_x at x = 0.01.
    x = 0.01
    fd = x * float(oracles.finite_difference(lambda t: oracles.mp.log(k_small_x(0.25, float(t))), x, h=1e-7))
    assert log_deriv_k(BesselOrder.real(0.25), x) == pytest.approx(fd, abs=1e-3)


def test_log_deriv_imaginary_matches_oracle():
    nu, x = 0.6, 0.7
    expected = x * oracles.finite_difference(lambda t: oracles.bessel_k_imag(nu, t), x) / oracles.bessel_k_imag(nu, x)
    assert log_deriv_k(BesselOrder.imag(nu), x) == pytest.approx(float(expected), rel=1e-8)


def test_log_deriv_pole_reported():
    # Locate a zero of K_{2i}(x) and evaluate next to it.
    from conebound.roots import bisect, sign_changes

    xs = np.geomspace(1e-3, 1.0, 300).tolist()
    fs = [bessel_k_imag(2.0, x) for x in xs]
    lo, hi = sign_changes(xs, fs)[-1]
    zero = bisect(lambda x: bessel_k_imag(2.0, x), lo, hi, xtol=1e-16)
    with pytest.raises(PoleError) as info:
        log_deriv_k(BesselOrder.imag(2.0), zero)
    assert info.value.location == zero


@settings(max_examples=50)
@given(st.floats(min_value=0.0, max_value=0.99), st.floats(min_value=0.1, max_value=20.0))
def test_wronskian_property(nu, x):
    w = bessel_i(nu, x) * bessel_k_deriv(nu, x) - bessel_i_deriv(nu, x) * bessel_k(nu, x)
    assert abs(w + 1.0 / x) < 1e-12 * max(1.0, 1.0 / x)
