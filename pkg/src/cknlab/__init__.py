"""Numerical laboratory for weighted second-order functional inequalities.

Closed-form mode quotients, high-accuracy quadrature of the underlying
functionals, variational minimization over nested bases, and a CLI for
scans and conjecture probes.
"""

from .constants import (
    FORMULA_GENERAL,
    FORMULA_PLAIN,
    FORMULA_WEIGHTED,
    BoundsReport,
    ClosedFormConstant,
    InequalityParams,
    ModeInfimumResult,
    ModeQuotient,
    hardy_step_factor,
    mode_infimum,
    mode_quotient_plain,
    mode_quotient_weighted,
    reference_constants,
    sharp_constant_closed_form,
    symmetry_breaking_bounds,
)
from .errors import (
    CknLabError,
    ConsistencyError,
    DivergentIntegralError,
    DomainError,
    NonConvergenceError,
    PreconditionError,
    UnsupportedRegimeError,
    VerificationMismatchError,
)
from .exppoly import ExpPoly
from .functionals import (
    FAMILY_IDS,
    ExtremalFamily,
    ModeEnergy,
    RadialProfile,
    extremal_profile,
    mode_energies,
    mode_quotient,
    one_dim_quotient,
    profile_from_callable,
    profile_from_exppoly,
    test_function_quotient,
)
from .quadrature import IntegrandHandle, QuadratureResult, QuadratureSpec, integrate
from .special import gamma, log_gamma, weighted_exp_integral
from .variational import (
    BasisSpec,
    GramTriple,
    MinimizationResult,
    ModeConstantEstimate,
    ScanReport,
    ScanRow,
    build_gram,
    estimate_mode_constant,
    make_basis,
    minimize_quotient,
    quotient_gradient,
    symmetry_breaking_scan,
)

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "BoundsReport",
    "CknLabError",
    "ClosedFormConstant",
    "ConsistencyError",
    "DivergentIntegralError",
    "DomainError",
    "ExpPoly",
    "ExtremalFamily",
    "FAMILY_IDS",
    "FORMULA_GENERAL",
    "FORMULA_PLAIN",
    "FORMULA_WEIGHTED",
    "GramTriple",
    "InequalityParams",
    "IntegrandHandle",
    "MinimizationResult",
    "ModeConstantEstimate",
    "ModeEnergy",
    "ModeInfimumResult",
    "ModeQuotient",
    "NonConvergenceError",
    "PreconditionError",
    "QuadratureResult",
    "QuadratureSpec",
    "RadialProfile",
    "ScanReport",
    "ScanRow",
    "UnsupportedRegimeError",
    "VerificationMismatchError",
    "build_gram",
    "estimate_mode_constant",
    "extremal_profile",
    "gamma",
    "hardy_step_factor",
    "integrate",
    "log_gamma",
    "make_basis",
    "minimize_quotient",
    "mode_energies",
    "mode_infimum",
    "mode_quotient",
    "mode_quotient_plain",
    "mode_quotient_weighted",
    "one_dim_quotient",
    "profile_from_callable",
    "profile_from_exppoly",
    "quotient_gradient",
    "reference_constants",
    "sharp_constant_closed_form",
    "symmetry_breaking_bounds",
    "test_function_quotient",
    "weighted_exp_integral",
]
