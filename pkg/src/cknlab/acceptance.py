"""Acceptance suite: ten end-to-end checks with stated tolerances.

Each criterion runs standalone, reports pass/fail with a timing, and
never raises; ``run_all`` prints one line per criterion when verbose.
The CLI ``selftest`` subcommand and the test suite both drive this
module.
"""

from __future__ import annotations

import math
import time
import traceback
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Tuple

import numpy as np

from .constants import (
    FORMULA_PLAIN,
    FORMULA_WEIGHTED,
    InequalityParams,
    mode_infimum,
    mode_quotient_plain,
    mode_quotient_weighted,
)
from .exppoly import ExpPoly
from .functionals import (
    ExtremalFamily,
    extremal_profile,
    mode_quotient,
    one_dim_quotient,
    test_function_quotient,
)
from .quadrature import IntegrandHandle, integrate
from .special import gamma, weighted_exp_integral
from .variational import (
    build_gram,
    estimate_mode_constant,
    make_basis,
    minimize_quotient,
    quotient_gradient,
    symmetry_breaking_scan,
)

__all__ = ["CriterionResult", "run_all", "CRITERIA"]


@dataclass(frozen=True)
class CriterionResult:
    index: int
    description: str
    passed: bool
    seconds: float
    detail: str


def _fail(msgs: List[str], condition: bool, message: str) -> bool:
    if not condition:
        msgs.append(message)
    return condition


def _check_1() -> Tuple[bool, str]:
    msgs: List[str] = []
    k1 = {2: Fraction(1, 4), 3: Fraction(9, 4), 4: Fraction(3969, 676)}
    k0 = {2: Fraction(9, 4), 3: Fraction(4), 4: Fraction(25, 4)}
    for n, expected in k1.items():
        got = mode_quotient_plain(n, 1).exact
        _fail(msgs, got == expected, f"J({n},1) = {got}, expected {expected}")
    for n, expected in k0.items():
        got = mode_quotient_plain(n, 0).exact
        _fail(msgs, got == expected, f"J({n},0) = {got}, expected {expected}")
    return not msgs, "; ".join(msgs) or "six table entries exact"


def _check_2() -> Tuple[bool, str]:
    msgs: List[str] = []
    for n in (2, 3, 4):
        inf = mode_infimum(FORMULA_PLAIN, InequalityParams(n), k_max=64)
        expected = mode_quotient_plain(n, 1).exact
        _fail(msgs, inf.exact == expected and inf.argmin_k == 1,
              f"plain infimum at n={n}: {inf.exact} at k={inf.argmin_k}")
    for n in range(5, 31):
        inf = mode_infimum(FORMULA_PLAIN, InequalityParams(n), k_max=64)
        expected = Fraction((n + 1) ** 2, 4)
        _fail(msgs, inf.exact == expected and inf.argmin_k == 0,
              f"plain infimum at n={n}: {inf.exact} at k={inf.argmin_k}")
    rng = np.random.default_rng(20260815)
    for _ in range(200):
        n = int(rng.integers(2, 31))
        alpha = float(rng.uniform(-0.95, (n - 5) / 5.0))
        inf = mode_infimum(FORMULA_WEIGHTED, InequalityParams(n, alpha), k_max=64)
        expected = (Fraction(n) + 3 * Fraction(alpha) + 1) ** 2 / 4
        ok = inf.argmin_k == 0 and (
            inf.exact == expected
            or abs(inf.value - float(expected)) <= 1e-12 * float(expected)
        )
        if not _fail(msgs, ok,
                     f"weighted infimum at n={n}, alpha={alpha}: "
                     f"{inf.exact} at k={inf.argmin_k}"):
            break
    return not msgs, "; ".join(msgs) or "all infima exact with correct argmin"


def _check_3() -> Tuple[bool, str]:
    msgs: List[str] = []
    for n in range(2, 11):
        value = test_function_quotient(n)
        closed = float(
            Fraction(n) * (n + 4) * Fraction(n**2 - 1) ** 2
            / (4 * Fraction(n**2 - n + 4) ** 2)
        )
        _fail(msgs, abs(value - closed) <= 1e-10 * closed,
              f"n={n}: quotient {value} vs closed {closed}")
        radial = (n + 1) ** 2 / 4.0
        if n in (2, 3):
            _fail(msgs, value < radial, f"n={n}: {value} not below {radial}")
        if n == 4:
            _fail(msgs, value > radial, f"n=4: {value} not above {radial}")
    return not msgs, "; ".join(msgs) or "nine dimensions agree and order correctly"


def _check_4() -> Tuple[bool, str]:
    msgs: List[str] = []
    rng = np.random.default_rng(41)
    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(2, 15))
        alpha = float(rng.uniform(-0.9, (n - 5) / 5.0))
        a = float(rng.uniform(0.3, 3.0)) * (1.0 if rng.uniform() < 0.5 else -1.0)
        b = float(rng.uniform(0.3, 3.0))
        params = InequalityParams(n, alpha)
        profile = extremal_profile(ExtremalFamily("thm1.2-2", a, b, params))
        value = mode_quotient(profile, params, 0)
        closed = (n + 3 * alpha + 1) ** 2 / 4.0
        rel = abs(value - closed) / closed
        worst = max(worst, rel)
        if not _fail(msgs, rel <= 1e-8,
                     f"n={n}, alpha={alpha:.4f}, a={a:.3f}, b={b:.3f}: rel {rel:.3e}"):
            break
    return not msgs, "; ".join(msgs) or f"30 samples, worst rel {worst:.3e}"


def _check_5() -> Tuple[bool, str]:
    msgs: List[str] = []
    for alpha in (-0.9, -0.75, -0.5):
        params = InequalityParams(1, alpha)
        profile = extremal_profile(ExtremalFamily("thm1.2-1a", 1.0, 1.0, params))
        value = one_dim_quotient(profile, alpha)
        closed = alpha**2 / 4.0
        _fail(msgs, abs(value - closed) <= 1e-8 * closed,
              f"case 1a alpha={alpha}: {value} vs {closed}")
    for alpha in (-0.4, 0.0, 1.0, 2.0):
        params = InequalityParams(1, alpha)
        profile = extremal_profile(ExtremalFamily("thm1.2-1b", 1.0, 1.0, params))
        value = one_dim_quotient(profile, alpha)
        closed = (3 * alpha + 2) ** 2 / 4.0
        _fail(msgs, abs(value - closed) <= 1e-8 * closed,
              f"case 1b alpha={alpha}: {value} vs {closed}")
    return not msgs, "; ".join(msgs) or "seven one-dimensional samples sharp"


def _check_6() -> Tuple[bool, str]:
    msgs: List[str] = []
    est5 = estimate_mode_constant(InequalityParams(5, 0.0), 0, (4, 8, 16))
    _fail(msgs, abs(est5.value - 9.0) <= 1e-4 * 9.0,
          f"n=5 estimate {est5.value}")
    est7 = estimate_mode_constant(InequalityParams(7, 0.0), 0, (4, 8, 16))
    _fail(msgs, abs(est7.value - 16.0) <= 1e-4 * 16.0,
          f"n=7 estimate {est7.value}")
    params = InequalityParams(5, 0.0)
    basis = make_basis(params, 0, 1, "derivative")
    anchor = minimize_quotient(build_gram(params, 0, basis, "derivative"))
    _fail(msgs, abs(anchor.value - 9.0) <= 1e-9 * 9.0,
          f"m=1 extremal-shape value {anchor.value}")
    return not msgs, "; ".join(msgs) or (
        f"estimates {est5.value:.6f}, {est7.value:.6f}; m=1 anchor exact"
    )


def _check_7() -> Tuple[bool, str]:
    msgs: List[str] = []
    for n in (2, 3):
        scan = symmetry_breaking_scan(n, 0.0, k_max=3, basis_sizes=(4, 8))
        row1, row0 = scan.rows[1], scan.rows[0]
        _fail(msgs, scan.verdict == "symmetry-broken at k=1",
              f"n={n}: verdict {scan.verdict!r}")
        _fail(msgs,
              row1.effective_value is not None
              and row1.effective_value < row0.verdict_value,
              f"n={n}: effective k=1 {row1.effective_value} "
              f"not below k=0 value {row0.verdict_value}")
    for n in (5, 6, 7):
        scan = symmetry_breaking_scan(n, 0.0, k_max=3, basis_sizes=(4, 8))
        _fail(msgs, scan.verdict == "radial", f"n={n}: verdict {scan.verdict!r}")
    return not msgs, "; ".join(msgs) or "broken at k=1 for n=2,3; radial for n=5,6,7"


def _check_8() -> Tuple[bool, str]:
    from .cli import RunConfig, cmd_probe_conjecture

    msgs: List[str] = []
    config = RunConfig(
        command="probe-conjecture",
        params=InequalityParams(4, 0.0),
        k_max=3,
        basis_sizes=(4, 8, 16),
    )
    payload = cmd_probe_conjecture(config).payload
    lower = 3969.0 / 676.0
    upper = 25.0 / 4.0
    best = payload["best_estimate"]
    _fail(msgs, lower - 1e-3 <= best <= upper + 1e-3,
          f"best estimate {best} outside [{lower - 1e-3}, {upper + 1e-3}]")
    k0 = payload["rows"][0]["full_value"]
    _fail(msgs, abs(k0 - upper) <= 1e-6, f"k=0 row {k0} not 25/4 within 1e-6")
    _fail(msgs, payload["banner"] == "numerical evidence only",
          f"banner {payload.get('banner')!r}")
    _fail(msgs, isinstance(payload["verdict"], str) and bool(payload["verdict"]),
          "missing verdict")
    return not msgs, "; ".join(msgs) or (
        f"best estimate {best:.9f} within proven bounds; verdict reported as evidence"
    )


def _check_9() -> Tuple[bool, str]:
    msgs: List[str] = []
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(200):
        p = float(rng.uniform(-0.9, 10.0))
        c = float(rng.uniform(0.05, 8.0))
        q = float(rng.uniform(0.2, 3.0))
        closed = weighted_exp_integral(p, c, q)
        res = integrate(IntegrandHandle(
            evaluator=lambda r, c=c, q=q: np.exp(-c * np.power(r, q)),
            weight_exponent=p,
            decay_hint=(c, q),
        ))
        rel = abs(res.value - closed) / closed
        worst = max(worst, rel)
        if not _fail(msgs, rel <= 1e-10,
                     f"p={p:.4f}, c={c:.4f}, q={q:.4f}: rel {rel:.3e}"):
            break
    return not msgs, "; ".join(msgs) or f"200 integrals, worst rel {worst:.3e}"


def _check_10() -> Tuple[bool, str]:
    msgs: List[str] = []

    # Dilation and amplitude invariance of the per-mode quotient.
    params = InequalityParams(6, 0.3)
    profile = extremal_profile(ExtremalFamily("thm1.2-2", 1.2, 0.8, params))
    base = mode_quotient(profile, params, 1)
    for lam in (0.5, 2.0):
        value = mode_quotient(profile.dilated(lam), params, 1)
        _fail(msgs, abs(value - base) <= 1e-9 * abs(base),
              f"dilation lam={lam}: {value} vs {base}")
    value = mode_quotient(profile.scaled(-2.5), params, 1)
    _fail(msgs, abs(value - base) <= 1e-9 * abs(base),
          f"amplitude scaling: {value} vs {base}")

    # One-dimensional Hardy step: int v^2 r^(s-2) <= (2/(s-1))^2 int v'^2 r^s.
    rng = np.random.default_rng(10)
    for _ in range(20):
        terms = tuple(
            (1.0 + j + float(rng.uniform(0, 0.5)), float(rng.standard_normal()))
            for j in range(3)
        )
        v = ExpPoly(terms, float(rng.uniform(0.5, 2.0)), 1.0)
        if v.is_zero:
            continue
        s = float(rng.uniform(2.0, 8.0))
        left = (v * v).moment(s - 2.0)
        d = v.derivative()
        right = (2.0 / (s - 1.0)) ** 2 * (d * d).moment(s)
        if not _fail(msgs, left <= right * (1.0 + 1e-12),
                     f"Hardy step violated: {left} > {right} at s={s:.3f}"):
            break

    # Factorial recurrence of the gamma kernel.
    rng = np.random.default_rng(11)
    for _ in range(50):
        t = float(rng.uniform(0.5, 80.0))
        rel = abs(gamma(t + 1.0) - t * gamma(t)) / gamma(t + 1.0)
        if not _fail(msgs, rel <= 1e-12, f"gamma recurrence at t={t:.4f}: rel {rel:.3e}"):
            break

    # Analytic gradient of log Q against central differences.
    gparams = InequalityParams(6, 0.25)
    gram = build_gram(gparams, 1, make_basis(gparams, 1, 6, "profile"), "profile")
    rng = np.random.default_rng(12)
    checked = 0
    while checked < 20:
        point = rng.standard_normal(6)
        try:
            _, grad = quotient_gradient(gram, point)
        except Exception:
            continue
        step = 1e-6
        for i in range(6):
            plus, minus = point.copy(), point.copy()
            plus[i] += step
            minus[i] -= step
            fd = (
                math.log(quotient_gradient(gram, plus)[0])
                - math.log(quotient_gradient(gram, minus)[0])
            ) / (2 * step)
            scale = max(1.0, abs(grad[i]))
            if not _fail(msgs, abs(fd - grad[i]) <= 1e-5 * scale,
                         f"gradient component {i}: fd {fd} vs analytic {grad[i]}"):
                break
        checked += 1

    # Basis-nesting monotonicity of the estimate traces.
    for n, alpha, k in ((5, 0.0, 0), (4, 0.0, 1), (6, 0.5, 2)):
        est = estimate_mode_constant(InequalityParams(n, alpha), k, (3, 6, 9))
        for before, after in zip(est.trace, est.trace[1:]):
            _fail(msgs, after <= before + 1e-10 * max(1.0, abs(before)),
                  f"trace increased at n={n}, k={k}: {est.trace}")

    # Per-mode lower-bound respect at k=0.
    for n, alpha in ((3, 0.0), (5, 0.25), (9, 0.6)):
        est = estimate_mode_constant(InequalityParams(n, alpha), 0, (3, 6))
        bound = (n + 3 * alpha + 1) ** 2 / 4.0
        _fail(msgs, est.value >= bound - 1e-6,
              f"estimate {est.value} below bound {bound} at n={n}, alpha={alpha}")

    return not msgs, "; ".join(msgs) or "all property families hold"


CRITERIA: Tuple[Tuple[int, str, float, Callable[[], Tuple[bool, str]]], ...] = (
    (1, "closed-form mode tables are exact rationals", 0.001, _check_1),
    (2, "mode infima and argmins, plain and weighted", 1.0, _check_2),
    (3, "test-profile quotient matches its closed form", 1.0, _check_3),
    (4, "weighted extremal family attains its constant", 5.0, _check_4),
    (5, "one-dimensional families attain their constants", 2.0, _check_5),
    (6, "variational recovery of radial constants", 10.0, _check_6),
    (7, "symmetry-breaking verdicts across dimensions", 30.0, _check_7),
    (8, "four-dimensional probe stays within proven bounds", 60.0, _check_8),
    (9, "weighted exponential integrals vs quadrature", 5.0, _check_9),
    (10, "property suite: invariances, bounds, gradients", 30.0, _check_10),
)


def run_criterion(index: int) -> CriterionResult:
    """Run one acceptance criterion by its 1-based index."""
    for idx, description, budget, check in CRITERIA:
        if idx != index:
            continue
        start = time.perf_counter()
        try:
            ok, detail = check()
        except Exception:
            ok = False
            detail = f"raised: {traceback.format_exc(limit=3).strip()}"
        elapsed = time.perf_counter() - start
        if ok and elapsed >= budget:
            ok = False
            detail = f"over time budget: {elapsed:.3f}s >= {budget}s"
        return CriterionResult(idx, description, ok, elapsed, detail)
    raise ValueError(f"no acceptance criterion with index {index}")


def run_all(verbose: bool = False) -> List[CriterionResult]:
    """Run every criterion; one pass/fail line each when verbose."""
    results = []
    for idx, *_ in CRITERIA:
        result = run_criterion(idx)
        results.append(result)
        if verbose:
            status = "PASS" if result.passed else "FAIL"
            print(
                f"criterion {result.index:2d} {status} "
                f"({result.seconds:7.3f}s) {result.description}: {result.detail}"
            )
    return results
