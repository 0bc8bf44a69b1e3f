"""Gamma kernel and weighted exponential integral against independent oracles."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cknlab.errors import DivergentIntegralError, DomainError, RangeOverflowError
from cknlab.quadrature import IntegrandHandle, integrate
from cknlab.special import gamma, log_gamma, weighted_exp_integral


def test_gamma_small_integers():
    for n, expected in ((1, 1.0), (2, 1.0), (3, 2.0), (4, 6.0), (5, 24.0), (7, 720.0)):
        assert gamma(float(n)) == pytest.approx(expected, rel=1e-14)


def test_gamma_half_integer():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma(1.5) == pytest.approx(0.5 * math.sqrt(math.pi), rel=1e-14)


def test_gamma_against_mpmath_grid():
    mpmath.mp.dps = 40
    ts = np.geomspace(1e-3, 170.0, 400)
    worst = 0.0
    for t in ts:
        ref = float(mpmath.gamma(mpmath.mpf(float(t))))
        worst = max(worst, abs(gamma(float(t)) - ref) / ref)
    assert worst < 1e-13


def test_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        gamma(0.0)
    with pytest.raises(DomainError):
        gamma(-1.5)


def test_gamma_overflow_guarded():
    with pytest.raises(RangeOverflowError):
        gamma(200.0)


def test_log_gamma_large_arguments():
    mpmath.mp.dps = 40
    for t in (5.0, 50.0, 500.0, 5000.0):
        ref = float(mpmath.loggamma(mpmath.mpf(t)).real)
        assert log_gamma(t) == pytest.approx(ref, rel=1e-13)


@given(st.floats(min_value=0.5, max_value=80.0))
@settings(max_examples=200)
def test_gamma_recurrence(t):
    assert gamma(t + 1.0) == pytest.approx(t * gamma(t), rel=1e-12)


def test_weighted_exp_integral_known_values():
    # int r^p e^{-c r^q} dr = Gamma((p+1)/q) / (q c^((p+1)/q))
    assert weighted_exp_integral(0.0, 1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
    assert weighted_exp_integral(6.0, 2.0, 1.0) == pytest.approx(720.0 / 2.0**7, rel=1e-14)
    assert weighted_exp_integral(0.0, 1.0, 2.0) == pytest.approx(
        0.5 * math.sqrt(math.pi), rel=1e-14
    )


def test_weighted_exp_integral_divergent():
    with pytest.raises(DivergentIntegralError):
        weighted_exp_integral(-1.0, 1.0, 1.0)
    with pytest.raises(DivergentIntegralError):
        weighted_exp_integral(2.0, -1.0, 1.0)


@given(
    st.floats(min_value=-0.9, max_value=10.0),
    st.floats(min_value=0.05, max_value=8.0),
    st.floats(min_value=0.2, max_value=3.0),
)
@settings(max_examples=60, deadline=None)
def test_weighted_exp_integral_matches_quadrature(p, c, q):
    closed = weighted_exp_integral(p, c, q)
    result = integrate(IntegrandHandle(
        evaluator=lambda r: np.exp(-c * np.power(r, q)),
        weight_exponent=p,
        decay_hint=(c, q),
    ))
    assert result.value == pytest.approx(closed, rel=1e-10)


@given(
    st.floats(min_value=-0.5, max_value=8.0),
    st.floats(min_value=0.1, max_value=5.0),
    st.floats(min_value=0.3, max_value=2.5),
    st.floats(min_value=0.25, max_value=4.0),
)
@settings(max_examples=200)
def test_weighted_exp_integral_dilation_law(p, c, q, lam):
    # Substituting r -> lam r multiplies the integral by lam^-(p+1)
    # and rescales c by lam^-q.
    left = weighted_exp_integral(p, c * lam**-q, q)
    right = lam ** (p + 1.0) * weighted_exp_integral(p, c, q)
    assert left == pytest.approx(right, rel=1e-11)
