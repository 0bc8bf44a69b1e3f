"""Gram assembly, quotient minimization, and the symmetry-breaking scan."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cknlab.constants import InequalityParams
from cknlab.errors import PreconditionError, UnsupportedRegimeError
from cknlab.variational import (
    BasisSpec,
    build_gram,
    estimate_mode_constant,
    make_basis,
    minimize_quotient,
    quotient_gradient,
    symmetry_breaking_scan,
)

P5 = InequalityParams(5, 0.0)


def test_make_basis_defaults():
    b_deriv = make_basis(P5, 0, 4, "derivative")
    assert b_deriv.m == 4
    assert b_deriv.gamma0 == pytest.approx(1.0)  # 2 alpha + 1 at alpha = 0
    assert b_deriv.decay_q == pytest.approx(1.0)  # alpha + 1
    b_prof = make_basis(P5, 0, 4, "profile")
    assert b_prof.gamma0 == pytest.approx(0.0)


def test_make_basis_bumps_away_from_divergence():
    # At N=2 the profile-formulation A entries diverge for gamma0 = 0.
    basis = make_basis(InequalityParams(2, 0.0), 0, 3, "profile")
    assert basis.gamma0 > 0.0


def test_make_basis_rejects_low_alpha():
    with pytest.raises(UnsupportedRegimeError):
        make_basis(InequalityParams(3, -1.5), 0, 3, "profile")


def test_gram_anchor_entry():
    basis = make_basis(P5, 0, 1, "derivative")
    gram = build_gram(P5, 0, basis, "derivative")
    assert gram.m_b[0, 0] == pytest.approx(math.gamma(7) / 2**7, rel=1e-12)


def test_gram_matrices_are_read_only_and_spot_checked():
    basis = make_basis(P5, 0, 3, "profile")
    gram = build_gram(P5, 0, basis, "profile")
    with pytest.raises(ValueError):
        gram.m_b[0, 0] = 1.0
    assert gram.diagnostics["spot_checked_entries"] > 0
    assert gram.diagnostics["spot_check_worst_rel"] < 1e-10


def test_gram_requires_multidimensional_params():
    with pytest.raises(PreconditionError):
        build_gram(InequalityParams(1, 0.0), 0,
                   BasisSpec(2, 1.0, 1.0), "derivative")


def test_quotient_gradient_euler_identity():
    basis = make_basis(P5, 0, 5, "profile")
    gram = build_gram(P5, 0, basis, "profile")
    rng = np.random.default_rng(3)
    for _ in range(10):
        y = rng.standard_normal(5)
        value, grad = quotient_gradient(gram, y)
        assert value > 0.0
        # log Q is 0-homogeneous, so y . grad log Q = 0 identically.
        assert abs(float(y @ grad)) <= 1e-10 * float(np.linalg.norm(grad) + 1.0)


@given(st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=20, deadline=None)
def test_gradient_matches_finite_differences(seed):
    basis = make_basis(P5, 0, 4, "profile")
    gram = build_gram(P5, 0, basis, "profile")
    y = np.random.default_rng(seed).standard_normal(4)
    value, grad = quotient_gradient(gram, y)
    step = 1e-6
    for i in range(4):
        plus, minus = y.copy(), y.copy()
        plus[i] += step
        minus[i] -= step
        fd = (
            math.log(quotient_gradient(gram, plus)[0])
            - math.log(quotient_gradient(gram, minus)[0])
        ) / (2 * step)
        assert fd == pytest.approx(grad[i], rel=1e-4, abs=1e-6)


def test_single_function_basis_recovers_constant():
    basis = make_basis(P5, 0, 1, "derivative")
    result = minimize_quotient(build_gram(P5, 0, basis, "derivative"))
    assert result.value == pytest.approx(9.0, rel=1e-12)
    assert result.converged


def test_minimize_is_deterministic():
    basis = make_basis(P5, 0, 6, "profile")
    gram = build_gram(P5, 0, basis, "profile")
    a = minimize_quotient(gram, seed=7)
    b = minimize_quotient(gram, seed=7)
    assert a.value == b.value
    assert np.array_equal(a.coeffs, b.coeffs)


def test_estimate_trace_monotone_and_accurate():
    est = estimate_mode_constant(P5, 0, (4, 8, 16))
    assert est.value == pytest.approx(9.0, rel=1e-4)
    for before, after in zip(est.trace, est.trace[1:]):
        assert after <= before + 1e-10 * max(1.0, abs(before))


def test_estimate_nonradial_upper_bound():
    est = estimate_mode_constant(InequalityParams(2, 0.0), 1, (4, 8, 16))
    assert est.value <= 0.75


def test_estimate_requires_increasing_sizes():
    with pytest.raises(PreconditionError):
        estimate_mode_constant(P5, 0, (8, 8))
    with pytest.raises(PreconditionError):
        estimate_mode_constant(P5, 0, ())


def test_scan_detects_symmetry_breaking():
    scan = symmetry_breaking_scan(3, 0.0, k_max=2, basis_sizes=(4, 8))
    assert scan.verdict == "symmetry-broken at k=1"
    assert scan.k_star == 1
    # The k=1 infimum (9/4) is not attained, so the variational value is
    # a strict upper bound; it must still beat the radial value 4 and
    # respect the exact per-mode lower bound.
    assert 2.25 - 1e-9 <= scan.best_value < 4.0
    assert scan.rows[1].effective_value == pytest.approx(2.25, rel=1e-9)
    assert scan.rows[0].hardy_factor == pytest.approx(1.0)
    assert scan.flag is None


def test_scan_radial_regime():
    scan = symmetry_breaking_scan(6, 0.0, k_max=2, basis_sizes=(4, 8))
    assert scan.verdict == "radial"
    assert scan.best_value == pytest.approx(49.0 / 4.0, rel=1e-6)


def test_scan_k0_verdict_uses_better_formulation():
    scan = symmetry_breaking_scan(2, 0.0, k_max=1, basis_sizes=(4, 8))
    row0 = scan.rows[0]
    assert row0.verdict_value == pytest.approx(
        min(row0.full_value, row0.raw_value), rel=1e-12
    )
    assert row0.verdict_value == pytest.approx(2.25, rel=1e-6)


def test_scan_conjecture_flag_only_for_open_case():
    open_scan = symmetry_breaking_scan(4, 0.0, k_max=1, basis_sizes=(4,))
    assert open_scan.flag == "conjecture-open"
    closed_scan = symmetry_breaking_scan(5, 0.0, k_max=1, basis_sizes=(4,))
    assert closed_scan.flag is None


def test_scan_jobs_do_not_change_results():
    serial = symmetry_breaking_scan(5, 0.25, k_max=2, basis_sizes=(4, 8), jobs=1)
    threaded = symmetry_breaking_scan(5, 0.25, k_max=2, basis_sizes=(4, 8), jobs=3)
    assert serial.verdict == threaded.verdict
    for a, b in zip(serial.rows, threaded.rows):
        assert a == b


def test_scan_preconditions():
    with pytest.raises(PreconditionError):
        symmetry_breaking_scan(1, 0.0)
    with pytest.raises(PreconditionError):
        symmetry_breaking_scan(4, 0.0, k_max=0)
