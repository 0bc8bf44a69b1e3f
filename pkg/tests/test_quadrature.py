"""Double-exponential quadrature on half-line integrals with known values."""

import math

import numpy as np
import pytest

from cknlab.errors import NonConvergenceError, NonFiniteSampleError
from cknlab.exppoly import ExpPoly
from cknlab.quadrature import (
    IntegrandHandle,
    QuadratureSpec,
    integrate,
    integrate_tail,
)
from cknlab.special import weighted_exp_integral


def test_plain_exponential():
    res = integrate(IntegrandHandle(lambda r: np.exp(-r), 0.0, (1.0, 1.0)))
    assert res.value == pytest.approx(1.0, rel=1e-13)
    assert res.err_est < 1e-12


def test_gaussian_moment():
    res = integrate(IntegrandHandle(lambda r: np.exp(-r * r), 2.0, (1.0, 2.0)))
    assert res.value == pytest.approx(0.25 * math.sqrt(math.pi), rel=1e-12)


def test_endpoint_singularity():
    # r^(-1/2) e^(-r) integrates to Gamma(1/2); the weight exponent
    # carries the singular factor so tanh-sinh clusters nodes correctly.
    res = integrate(IntegrandHandle(lambda r: np.exp(-r), -0.5, (1.0, 1.0)))
    assert res.value == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_without_decay_hint():
    res = integrate(IntegrandHandle(lambda r: np.exp(-2.0 * r), 3.0, None))
    assert res.value == pytest.approx(weighted_exp_integral(3.0, 2.0, 1.0), rel=1e-11)


def test_factored_handle_matches_plain():
    f = ExpPoly(((1.0, 1.0), (2.0, -0.3)), 1.5, 1.0)
    plain = integrate(IntegrandHandle(lambda r: f(r) * f(r), 2.0, (3.0, 1.0)))
    factored = integrate(IntegrandHandle(None, 2.0, (3.0, 1.0), factors=(f, f)))
    assert factored.value == pytest.approx(plain.value, rel=1e-12)


def test_algebraic_tail():
    # 1/(1+r)^4 integrates to 1/3 despite only polynomial decay.
    res = integrate(IntegrandHandle(lambda r: (1.0 + r) ** -4.0, 0.0, None))
    assert res.value == pytest.approx(1.0 / 3.0, rel=1e-11)


def test_tail_integral():
    res = integrate_tail(IntegrandHandle(lambda r: np.exp(-r), 0.0, (1.0, 1.0)), 2.0)
    assert res.value == pytest.approx(math.exp(-2.0), rel=1e-12)


def test_rel_tol_is_respected():
    spec = QuadratureSpec(rel_tol=1e-6)
    res = integrate(IntegrandHandle(lambda r: np.exp(-r), 4.0, (1.0, 1.0)), spec)
    assert res.value == pytest.approx(24.0, rel=1e-6)


def test_determinism():
    handle = IntegrandHandle(lambda r: np.exp(-r) / (1.0 + r), 1.0, (1.0, 1.0))
    a = integrate(handle)
    b = integrate(handle)
    assert a.value == b.value and a.err_est == b.err_est


def test_divergent_integral_does_not_converge():
    with pytest.raises(NonConvergenceError):
        integrate(IntegrandHandle(lambda r: 1.0 / (1.0 + r), 0.0, None))


def test_non_finite_sample_reported():
    def bad(r):
        return np.where(r > 1.0, np.nan, np.exp(-r))

    with pytest.raises(NonFiniteSampleError):
        integrate(IntegrandHandle(bad, 0.0, (1.0, 1.0)))


def test_denormal_times_huge_weight_is_rescued():
    # Integrand values underflow to denormals at extreme nodes while the
    # transformed weight overflows; the true integral is still finite.
    def steep(r):
        with np.errstate(over="ignore", under="ignore", divide="ignore"):
            return np.where(r > 0.0, np.exp(-1.0 / np.maximum(r, 1e-320)), 0.0) / (
                1.0 + r
            ) ** 4
    res = integrate(IntegrandHandle(steep, 0.0, None))
    assert np.isfinite(res.value)
    # Reference value from 30-digit mpmath.quad.
    assert res.value == pytest.approx(0.041247381633079506, rel=1e-9)


def test_cancellation_reaches_mass_floor():
    # int_0^inf (1 - r) e^{-r} dr = 0 exactly: pure cancellation.
    poly = ExpPoly(((0.0, 1.0), (1.0, -1.0)), 1.0, 1.0)
    res = integrate(IntegrandHandle(poly, 0.0, (1.0, 1.0)))
    assert abs(res.value) < 1e-14
