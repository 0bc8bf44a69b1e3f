"""Radial profiles, per-mode energies and quotients.

A function u on R^N decomposed over spherical harmonics phi_k reduces,
mode by mode, to radial profiles v(r).  For one mode k the three energies
entering the product inequality become one-dimensional integrals
(the surface measure of the sphere cancels in the quotient and is
omitted):

    A = int |v''|^2 r^(N+2k-2a-1) dr
        + (2a+1)(N+2k-1) int |v'|^2 r^(N+2k-2a-3) dr
    B = int |v'|^2 r^(N+2k-1) dr
    C = int |v'|^2 r^(N+2k-a-2) dr + (a+1) k int |v|^2 r^(N+2k-a-4) dr

with a the weight exponent alpha, and the per-mode quotient is
Q = A B / C^2, invariant under amplitude scaling and dilation of v.

Profiles carry both a vectorised evaluator (v, v', v'') and, when they
are exponential polynomials, their closed algebraic form; energies are
then computed two independent ways (Gamma closed forms vs adaptive
quadrature) and cross-checked.

The closed-form extremal families are named by opaque ids (the CLI's
--family vocabulary).  With m := alpha + 1:

* "thm1.2-2", "thm1.2-1b", "thmA": v = a (1 + b r^m) exp(-b r^m)
  ("thmA" is the m = 1 specialisation);
* "thm1.2-1a": v' = -a exp(-b r^m)  (v is the tail integral of -v',
  reconstructed by quadrature; arises for N = 1, alpha <= -1/2);
* "thmB": v = a exp(-b r^2);
* "thmC-1" (beta < 1, b > 0):  v' = a r exp(-kappa r^(1-beta)),
  kappa = b / (1 - beta); v itself is an upper incomplete Gamma;
* "thmC-2" (beta > 1, b < 0):  v' = a r^(1-N) exp(-kappa r^(1-beta));
  v is a lower incomplete Gamma, flat at the origin with an algebraic
  r^(2-N) tail;
* "thmD": v = a exp(-b r^(2m)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import gammainc, gammaincc

from .constants import InequalityParams
from .errors import (
    ConsistencyError,
    DivergentIntegralError,
    DomainError,
    RangeOverflowError,
    ZeroDenominatorError,
)
from .exppoly import ExpPoly
from .quadrature import IntegrandHandle, QuadratureSpec, integrate, integrate_tail
from .special import log_gamma

__all__ = [
    "FAMILY_IDS",
    "ExtremalFamily",
    "RadialProfile",
    "ModeEnergy",
    "laplace_beltrami_eigenvalue",
    "extremal_profile",
    "profile_from_exppoly",
    "profile_from_callable",
    "exponential_profile",
    "mode_energies",
    "mode_quotient",
    "test_function_quotient",
    "one_dim_quotient",
]

FAMILY_IDS = (
    "thmA",
    "thm1.2-1a",
    "thm1.2-1b",
    "thm1.2-2",
    "thmB",
    "thmC-1",
    "thmC-2",
    "thmD",
)

# Dual-path agreement tolerance for energies (relative).
ENERGY_AGREEMENT_RTOL = 1e-9
# Denominator energies below this are treated as zero.
_DENOM_FLOOR = 1e-150


@dataclass(frozen=True)
class ExtremalFamily:
    """A closed-form extremal profile: family id plus amplitude a and
    rate b (dilation gauge).  b > 0 except for "thmC-2" where b < 0."""

    family_id: str
    a: float
    b: float
    params: InequalityParams

    def __post_init__(self) -> None:
        if self.family_id not in FAMILY_IDS:
            raise DomainError(
                f"unknown family id {self.family_id!r}; expected one of {FAMILY_IDS}"
            )
        if not (math.isfinite(self.a) and self.a != 0.0):
            raise DomainError(f"amplitude a must be finite and nonzero, got {self.a!r}")
        if not math.isfinite(self.b):
            raise DomainError(f"rate b must be finite, got {self.b!r}")
        if self.family_id == "thmC-2":
            if self.b >= 0.0:
                raise DomainError("family 'thmC-2' requires b < 0")
        elif self.b <= 0.0:
            raise DomainError(f"family {self.family_id!r} requires b > 0")
        if self.family_id.startswith("thm1.2") or self.family_id == "thmD":
            if not float(self.params.alpha) > -1.0:
                raise DomainError(
                    f"family {self.family_id!r} requires alpha > -1, "
                    f"got {self.params.alpha}"
                )
        if self.family_id == "thmC-1":
            if self.params.beta is None or not float(self.params.beta) < 1.0:
                raise DomainError("family 'thmC-1' requires params.beta < 1")
        if self.family_id == "thmC-2":
            if self.params.beta is None or not float(self.params.beta) > 1.0:
                raise DomainError("family 'thmC-2' requires params.beta > 1")
            if self.params.n < 3:
                raise DomainError(
                    "family 'thmC-2' requires N >= 3 (profile reconstruction "
                    "diverges otherwise)"
                )


@dataclass(frozen=True)
class RadialProfile:
    """A radial profile with evaluator and optional closed algebraic form.

    ``evaluator(r)`` returns the triple (v, v', v'') as float arrays for
    r > 0.  When the profile is an exponential polynomial the
    corresponding ``poly_*`` fields hold its closed form (``poly_v`` may
    be absent for tail-integral families whose derivative is closed but
    whose value is not).
    """

    kind: str  # "closed-form-family" | "basis-coefficients" | "callable"
    evaluator: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray, np.ndarray]]
    decay_hint: Optional[Tuple[float, float]] = None
    poly_v: Optional[ExpPoly] = None
    poly_d1: Optional[ExpPoly] = None
    poly_d2: Optional[ExpPoly] = None
    family: Optional[ExtremalFamily] = None
    coeffs: Optional[tuple] = None

    def __post_init__(self) -> None:
        if self.kind not in ("closed-form-family", "basis-coefficients", "callable"):
            raise DomainError(f"unknown profile kind {self.kind!r}")
        if not callable(self.evaluator):
            raise DomainError("profile evaluator must be callable")

    @property
    def has_closed_derivatives(self) -> bool:
        return self.poly_d1 is not None and self.poly_d2 is not None

    def component_poly(self, component: str) -> Optional[ExpPoly]:
        return {"v": self.poly_v, "d1": self.poly_d1, "d2": self.poly_d2}[component]

    def scaled(self, s: float) -> "RadialProfile":
        """Amplitude-scaled profile s * v."""
        if not (math.isfinite(s) and s != 0.0):
            raise DomainError(f"scale must be finite and nonzero, got {s!r}")
        ev = self.evaluator

        def scaled_ev(r):
            v, d1, d2 = ev(r)
            return s * v, s * d1, s * d2

        return replace(
            self,
            evaluator=scaled_ev,
            poly_v=None if self.poly_v is None else self.poly_v.scaled(s),
            poly_d1=None if self.poly_d1 is None else self.poly_d1.scaled(s),
            poly_d2=None if self.poly_d2 is None else self.poly_d2.scaled(s),
            family=None,
        )

    def dilated(self, lam: float) -> "RadialProfile":
        """The profile r -> v(lam * r)."""
        if not (math.isfinite(lam) and lam > 0.0):
            raise DomainError(f"dilation factor must be finite and > 0, got {lam!r}")
        ev = self.evaluator

        def dilated_ev(r):
            v, d1, d2 = ev(lam * np.asarray(r, dtype=float))
            return v, lam * d1, lam**2 * d2

        hint = self.decay_hint
        if hint is not None:
            c, q = hint
            hint = (c * lam**q, q)
        return replace(
            self,
            evaluator=dilated_ev,
            decay_hint=hint,
            poly_v=None if self.poly_v is None else self.poly_v.dilated(lam),
            poly_d1=None if self.poly_d1 is None else self.poly_d1.dilated(lam).scaled(lam),
            poly_d2=None if self.poly_d2 is None else self.poly_d2.dilated(lam).scaled(lam**2),
            family=None,
        )


@dataclass(frozen=True)
class ModeEnergy:
    """The per-mode energy triple (A, B, C) for one profile.

    ``rel_gap`` is the worst relative disagreement between the closed
    and quadrature routes when both ran (method "both"/"auto"), else None.
    """

    energy_a: float
    energy_b: float
    energy_c: float
    k: int
    params: InequalityParams
    method: str
    rel_gap: Optional[float] = None


def laplace_beltrami_eigenvalue(n: int, k: int) -> int:
    """Eigenvalue k (N + k - 2) of the spherical Laplacian on the k-th
    harmonic subspace of S^(N-1); N >= 2, k >= 0."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise DomainError(f"eigenvalues require integer dimension n >= 2, got {n!r}")
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise DomainError(f"mode index k must be an integer >= 0, got {k!r}")
    return k * (n + k - 2)


# -- profile constructors --------------------------------------------------


_LOG_DOUBLE_MAX = 709.0


def _gamma_prefactor(g: float, kappa: float) -> float:
    """Gamma(g) * kappa^(-g), computed in log space.

    This is the origin value of a reconstructed antiderivative; when it
    exceeds double range the profile cannot be represented, which
    happens only with beta very close to the crossover at 1.
    """
    log_pref = log_gamma(g) - g * math.log(kappa)
    if log_pref > _LOG_DOUBLE_MAX:
        raise RangeOverflowError(
            f"profile origin value exp({log_pref:.1f}) exceeds double-precision "
            "range; beta is too close to the crossover at 1 for this rate"
        )
    return math.exp(log_pref)


def _evaluator_from_polys(
    poly_v: Optional[ExpPoly],
    poly_d1: ExpPoly,
    poly_d2: ExpPoly,
    tail_of: Optional[ExpPoly] = None,
    spec: QuadratureSpec = QuadratureSpec(),
) -> Callable:
    """Build the (v, v', v'') evaluator; when poly_v is None, v is
    reconstructed as -integral_r^inf v'(s) ds point by point."""

    def ev(r):
        r = np.asarray(r, dtype=float)
        d1 = poly_d1(r)
        d2 = poly_d2(r)
        if poly_v is not None:
            v = poly_v(r)
        else:
            src = tail_of if tail_of is not None else poly_d1
            hint = (src.rate, src.decay_power) if src.rate > 0 else None
            flat = np.ravel(r)
            vals = np.empty_like(flat)
            for i, ri in enumerate(flat):
                res = integrate_tail(IntegrandHandle(src, 0.0, hint), float(ri), spec)
                vals[i] = -res.value
            v = vals.reshape(np.shape(r))
        return v, d1, d2

    return ev


def profile_from_exppoly(
    poly_v: ExpPoly,
    kind: str = "basis-coefficients",
    coeffs: Optional[tuple] = None,
    family: Optional[ExtremalFamily] = None,
) -> RadialProfile:
    """Profile from a closed-form v; derivatives are derived symbolically."""
    if poly_v.rate <= 0.0:
        raise DomainError("profile polynomials must decay (rate > 0)")
    d1 = poly_v.derivative()
    d2 = d1.derivative()
    return RadialProfile(
        kind=kind,
        evaluator=_evaluator_from_polys(poly_v, d1, d2),
        decay_hint=(poly_v.rate, poly_v.decay_power),
        poly_v=poly_v,
        poly_d1=d1,
        poly_d2=d2,
        family=family,
        coeffs=coeffs,
    )


def exponential_profile(rate: float = 1.0) -> RadialProfile:
    """The reference profile v = exp(-rate * r)."""
    return profile_from_exppoly(ExpPoly(((0.0, 1.0),), rate, 1.0), kind="callable")


def profile_from_callable(
    evaluator: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray, np.ndarray]],
    decay_hint: Optional[Tuple[float, float]] = None,
    validate: bool = True,
) -> RadialProfile:
    """Wrap a user-supplied (v, v', v'') evaluator.

    When ``validate`` is set, v' and v'' are spot-checked against central
    finite differences of v on a log-spaced grid (relative tolerance
    1e-6 with a scale floor); inconsistent triples raise DomainError.
    """
    profile = RadialProfile(kind="callable", evaluator=evaluator, decay_hint=decay_hint)
    if validate:
        grid = np.geomspace(0.1, 10.0, 9)
        h = 1e-6 * grid
        v0, d1, d2 = evaluator(grid)
        vp, d1p, _ = evaluator(grid + h)
        vm, d1m, _ = evaluator(grid - h)
        fd1 = (vp - vm) / (2.0 * h)
        fd2 = (d1p - d1m) / (2.0 * h)
        scale1 = np.maximum(np.abs(d1), np.maximum(np.abs(v0) / grid, 1e-30))
        scale2 = np.maximum(np.abs(d2), np.maximum(np.abs(d1) / grid, 1e-30))
        if not (
            np.all(np.abs(fd1 - d1) <= 1e-6 * scale1 + 1e-12)
            and np.all(np.abs(fd2 - d2) <= 1e-6 * scale2 + 1e-12)
        ):
            raise DomainError(
                "profile evaluator failed the finite-difference consistency check: "
                "v', v'' do not match derivatives of v within 1e-6 relative"
            )
    return profile


def extremal_profile(fam: ExtremalFamily, spec: QuadratureSpec = QuadratureSpec()) -> RadialProfile:
    """The RadialProfile of a closed-form extremal family member."""
    a, b = float(fam.a), float(fam.b)
    alpha = float(fam.params.alpha)
    m = alpha + 1.0
    fid = fam.family_id

    if fid in ("thm1.2-2", "thm1.2-1b", "thmA"):
        if fid == "thmA":
            m = 1.0
        # v = a (1 + b r^m) e^{-b r^m}; the r^(2m-1) form of v' below is
        # the telescoped derivative (the r^(m-1) terms cancel).
        poly_v = ExpPoly(((0.0, a), (m, a * b)), b, m)
        poly_d1 = ExpPoly(((2.0 * m - 1.0, -a * b**2 * m),), b, m)
        poly_d2 = ExpPoly(
            ((2.0 * m - 2.0, -a * b**2 * m * (2.0 * m - 1.0)),
             (3.0 * m - 2.0, a * b**3 * m**2)),
            b, m,
        )
        return RadialProfile(
            kind="closed-form-family",
            evaluator=_evaluator_from_polys(poly_v, poly_d1, poly_d2),
            decay_hint=(b, m),
            poly_v=poly_v,
            poly_d1=poly_d1,
            poly_d2=poly_d2,
            family=fam,
        )

    if fid == "thm1.2-1a":
        # v(r) = a * integral_r^inf e^{-b s^m} ds; closed derivatives,
        # v itself reconstructed by tail quadrature.
        poly_d1 = ExpPoly(((0.0, -a),), b, m)
        poly_d2 = ExpPoly(((m - 1.0, a * b * m),), b, m)
        return RadialProfile(
            kind="closed-form-family",
            evaluator=_evaluator_from_polys(None, poly_d1, poly_d2, spec=spec),
            decay_hint=(b, m),
            poly_v=None,
            poly_d1=poly_d1,
            poly_d2=poly_d2,
            family=fam,
        )

    if fid == "thmB":
        return profile_from_exppoly(
            ExpPoly(((0.0, a),), b, 2.0), kind="closed-form-family", family=fam
        )

    if fid == "thmD":
        return profile_from_exppoly(
            ExpPoly(((0.0, a),), b, 2.0 * m), kind="closed-form-family", family=fam
        )

    if fid == "thmC-1":
        beta = float(fam.params.beta)
        s = 1.0 - beta  # > 0
        kappa = b / s
        poly_d1 = ExpPoly(((1.0, a),), kappa, s)
        poly_d2 = poly_d1.derivative()
        # v(r) = -int_r^inf a x e^{-kappa x^s} dx
        #      = -(a/s) kappa^{-2/s} Gamma(2/s) Q(2/s, kappa r^s).
        g = 2.0 / s
        scale = -(a / s) * _gamma_prefactor(g, kappa)

        def ev_c1(r):
            r = np.asarray(r, dtype=float)
            v = scale * gammaincc(g, kappa * np.power(r, s))
            return v, poly_d1(r), poly_d2(r)

        return RadialProfile(
            kind="closed-form-family",
            evaluator=ev_c1,
            decay_hint=(kappa, s),
            poly_v=None,
            poly_d1=poly_d1,
            poly_d2=poly_d2,
            family=fam,
        )

    # "thmC-2": beta > 1, b < 0, kappa = b/(1-beta) > 0 but the
    # exponential carries a *negative* power of r (decays towards the
    # origin, algebraic r^(2-N) tail at infinity) so there is no ExpPoly
    # form.  Substituting y = kappa x^s turns the tail integral of v'
    # into a lower incomplete Gamma:
    #     v(r) = -(a/|s|) kappa^{-g} Gamma(g) P(g, kappa r^s),
    #     g = (2-N)/s > 0.
    # Derivatives are assembled in log space; every exponent below is
    # dominated by -kappa r^s near the origin, so no overflow arises.
    beta = float(fam.params.beta)
    s = 1.0 - beta  # < 0
    kappa = b / s  # > 0
    n = fam.params.n
    g = (2.0 - n) / s
    scale = -(a / abs(s)) * _gamma_prefactor(g, kappa)

    def ev_c2(r):
        r = np.asarray(r, dtype=float)
        shape = np.shape(r)
        flat = np.ravel(r)
        pos = flat > 0.0
        safe = np.where(pos, flat, 1.0)
        with np.errstate(over="ignore", under="ignore", divide="ignore"):
            logr = np.log(safe)
            decay = kappa * np.power(safe, s)
            v = np.where(pos, scale * gammainc(g, decay), scale)
            d1 = np.where(pos, a * np.exp((1.0 - n) * logr - decay), 0.0)
            d2 = np.where(
                pos,
                a * ((1.0 - n) * np.exp(-n * logr - decay)
                     + kappa * abs(s) * np.exp((s - n) * logr - decay)),
                0.0,
            )
        return v.reshape(shape), d1.reshape(shape), d2.reshape(shape)

    return RadialProfile(kind="closed-form-family", evaluator=ev_c2, decay_hint=None, family=fam)


# -- energies and quotients -------------------------------------------------


def _component_energy(
    profile: RadialProfile,
    component: str,
    p: float,
    spec: QuadratureSpec,
    method: str,
) -> Tuple[Optional[float], Optional[float]]:
    """(closed, quadrature) values of  int component(r)^2 r^p dr; entries
    are None when that route was not requested/available."""
    poly = profile.component_poly(component)
    closed = quad = None
    if method in ("closed", "both") and poly is not None:
        closed = (poly * poly).moment(p)
    if method in ("quadrature", "both") or (method == "closed" and poly is None):
        if poly is not None:
            f = poly
            hint = (2.0 * poly.rate, poly.decay_power) if poly.rate > 0 else None
        else:
            idx = {"v": 0, "d1": 1, "d2": 2}[component]

            def f(r, _i=idx):
                return profile.evaluator(r)[_i]

            hint = None
            if profile.decay_hint is not None:
                c, q = profile.decay_hint
                hint = (2.0 * c, q)
        p_handle = p
        if p <= -0.9:
            # Weights at/below the handle's r^p > r^-1 contract are valid
            # here only because the profile itself vanishes at the
            # origin; fold half the weight into each squared factor so
            # the handle sees p = 0 and the combined amplitude stays
            # representable.
            if isinstance(f, ExpPoly):
                f = ExpPoly(
                    tuple((g + p / 2.0, c) for g, c in f.terms), f.rate, f.decay_power
                )
            else:
                base = f

                def f(r, _b=base, _s=p / 2.0):
                    vals = np.asarray(_b(r), dtype=float)
                    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
                        # An underflowed base against a huge power shift
                        # is a true near-zero; 0 * inf must not poison it.
                        return np.where(vals == 0.0, 0.0, vals * np.power(r, _s))

            p_handle = 0.0
        quad = integrate(IntegrandHandle(None, p_handle, hint, factors=(f, f)), spec).value
    return closed, quad


def _combine(pairs, coefs) -> Tuple[float, Optional[float]]:
    """Combine per-term (closed, quad) pairs with coefficients; returns
    (value, rel_gap) preferring closed values, and the relative gap of
    the combined closed vs combined quadrature totals when both exist."""
    closed_total = 0.0
    quad_total = 0.0
    have_closed = True
    have_quad = True
    value = 0.0
    for (closed, quad), coef in zip(pairs, coefs):
        term = closed if closed is not None else quad
        value += coef * term
        if closed is None:
            have_closed = False
        else:
            closed_total += coef * closed
        if quad is None:
            have_quad = False
        else:
            quad_total += coef * quad
    if have_closed and have_quad:
        scale = max(abs(closed_total), abs(quad_total), 1e-300)
        return (closed_total, abs(closed_total - quad_total) / scale)
    return value, None


def mode_energies(
    profile: RadialProfile,
    params: InequalityParams,
    k: int,
    spec: QuadratureSpec = QuadratureSpec(),
    method: str = "auto",
) -> ModeEnergy:
    """The energy triple (A, B, C) of one profile on mode k.

    ``method``:

    * "auto" (default): both routes when the profile has closed
      derivative forms (cross-checked to 1e-9 relative), else quadrature;
    * "closed": closed Gamma forms (falls back to quadrature for any
      component with no closed form);
    * "quadrature": adaptive quadrature only;
    * "both": force both and cross-check.

    Raises ConsistencyError when the two routes disagree, and
    DivergentIntegralError naming the offending exponent when a requested
    moment diverges.
    """
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise DomainError(f"mode index k must be an integer >= 0, got {k!r}")
    n, alpha = params.n, float(params.alpha)
    if n < 2:
        raise DomainError("mode energies require dimension n >= 2 "
                          "(use one_dim_quotient for N = 1)")
    if not alpha > -1.0:
        raise DomainError(f"alpha must be > -1, got {alpha}")
    if method not in ("auto", "closed", "quadrature", "both"):
        raise DomainError(f"unknown method {method!r}")
    if method == "auto":
        method = "both" if profile.has_closed_derivatives else "quadrature"

    p_a1 = n + 2 * k - 2 * alpha - 1.0
    c_a2 = (2.0 * alpha + 1.0) * (n + 2 * k - 1.0)
    p_a2 = n + 2 * k - 2 * alpha - 3.0
    p_b = n + 2 * k - 1.0
    p_c1 = n + 2 * k - alpha - 2.0
    c_c2 = (alpha + 1.0) * k
    p_c2 = n + 2 * k - alpha - 4.0

    a_terms = [_component_energy(profile, "d2", p_a1, spec, method)]
    a_coefs = [1.0]
    if c_a2 != 0.0:
        a_terms.append(_component_energy(profile, "d1", p_a2, spec, method))
        a_coefs.append(c_a2)
    energy_a, gap_a = _combine(a_terms, a_coefs)

    energy_b, gap_b = _combine([_component_energy(profile, "d1", p_b, spec, method)], [1.0])

    c_terms = [_component_energy(profile, "d1", p_c1, spec, method)]
    c_coefs = [1.0]
    if c_c2 != 0.0:
        c_terms.append(_component_energy(profile, "v", p_c2, spec, method))
        c_coefs.append(c_c2)
    energy_c, gap_c = _combine(c_terms, c_coefs)

    gaps = [g for g in (gap_a, gap_b, gap_c) if g is not None]
    rel_gap = max(gaps) if gaps else None
    if rel_gap is not None and rel_gap > ENERGY_AGREEMENT_RTOL:
        raise ConsistencyError(
            f"closed-form and quadrature energies disagree (rel gap {rel_gap:.3e} "
            f"> {ENERGY_AGREEMENT_RTOL}) for k={k}, params={params!r}"
        )
    return ModeEnergy(energy_a, energy_b, energy_c, k, params, method, rel_gap)


def mode_quotient(
    profile: RadialProfile,
    params: InequalityParams,
    k: int,
    spec: QuadratureSpec = QuadratureSpec(),
    method: str = "auto",
) -> float:
    """The per-mode quotient Q = A B / C^2 of one profile."""
    e = mode_energies(profile, params, k, spec, method)
    if not (e.energy_c > _DENOM_FLOOR):
        raise ZeroDenominatorError(
            f"denominator energy C = {e.energy_c!r} is zero (or numerically so)"
        )
    return e.energy_a * e.energy_b / e.energy_c**2


def test_function_quotient(n: int, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Quotient of the explicit first-harmonic test function (profile
    v = e^{-r} on mode k = 1, alpha = 0).

    Its closed form is  N (N+4) (N^2-1)^2 / (4 (N^2-N+4)^2)  via three
    Gamma integrals; the value is recomputed by adaptive quadrature and
    the two must agree to 1e-10 relative (ConsistencyError otherwise).
    Returns the closed form.  For N in {2, 3} this value lies below the
    radial constant (N+1)^2/4 (breaking symmetry); for N = 4 above it.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise DomainError(f"test function quotient requires integer n >= 2, got {n!r}")
    exact = Fraction(n * (n + 4) * (n**2 - 1) ** 2, 4 * (n**2 - n + 4) ** 2)
    profile = exponential_profile(1.0)
    params = InequalityParams(n, 0.0)
    e = mode_energies(profile, params, 1, spec, method="quadrature")
    q_quad = e.energy_a * e.energy_b / e.energy_c**2
    rel = abs(q_quad - float(exact)) / float(exact)
    if rel > 1e-10:
        raise ConsistencyError(
            f"test-function quotient: quadrature value {q_quad!r} disagrees with "
            f"closed form {float(exact)!r} (rel {rel:.3e})"
        )
    return float(exact)


def one_dim_quotient(
    profile: RadialProfile,
    alpha: float,
    spec: QuadratureSpec = QuadratureSpec(),
    method: str = "auto",
) -> float:
    """The N = 1 quotient for even profiles v(|x|):

        Q = (2 int |v''|^2 r^(-2a) dr) (2 int |v'|^2 dr)
            / (2 int |v'|^2 r^(-a-1) dr)^2

    (each half-line integral doubled for the even extension; the factors
    cancel in the quotient but are kept so the energies are the true
    line integrals).  Requires alpha > -1.
    """
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha > -1.0):
        raise DomainError(f"alpha must be finite and > -1, got {alpha!r}")
    if method not in ("auto", "closed", "quadrature", "both"):
        raise DomainError(f"unknown method {method!r}")
    if method == "auto":
        method = "both" if profile.has_closed_derivatives else "quadrature"

    pairs = [
        _component_energy(profile, "d2", -2.0 * alpha, spec, method),
        _component_energy(profile, "d1", 0.0, spec, method),
        _component_energy(profile, "d1", -alpha - 1.0, spec, method),
    ]
    values = []
    for closed, quad in pairs:
        if closed is not None and quad is not None:
            scale = max(abs(closed), abs(quad), 1e-300)
            if abs(closed - quad) / scale > ENERGY_AGREEMENT_RTOL:
                raise ConsistencyError(
                    "one-dimensional energies: closed form and quadrature disagree"
                )
        values.append(closed if closed is not None else quad)
    a_val, b_val, c_val = (2.0 * v for v in values)
    if not (c_val > _DENOM_FLOOR):
        raise ZeroDenominatorError(f"denominator energy {c_val!r} is zero")
    return a_val * b_val / c_val**2
