"""Vacuum energy density of a scalar field near a delta-like impurity.

The package provides the point-impurity energy density in two provably
equivalent forms, the extended-impurity (rescaled) model together with
its point-like limit, the dictionary between the three coupling
conventions, and the adaptive quadrature engine everything runs on.
"""

from .quadrature import (
    DEFAULT_CONFIG,
    IntegrationResult,
    NonFiniteIntegrandError,
    QuadratureConfig,
    TailStrategy,
    integrate_real_line,
    integrate_semi_infinite,
)
from .special import script_E
from .shapes import ShapeFunction, ball_shape, builtin_shape, gaussian_shape, trivial_shape
from .core import (
    EIGHT_PI_CUBED,
    TWO_PI_SQ,
    ConvergenceRow,
    Coupling,
    CouplingConvention,
    EnergyDensityProfile,
    Eq4Check,
    H_lambda,
    H_prime_lambda,
    LorentzianShapeAverage,
    ProfileSample,
    RadialPoint,
    convergence_study,
    energy_density_extended,
    energy_density_point_closed,
    energy_density_point_integral,
    extended_profile,
    identity_eq4_check,
    point_profile,
    resolvent_difference_check,
    resolvent_identity_check,
    t_lambda,
    t_zero,
    to_alpha,
    to_alpha_a,
    to_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG",
    "IntegrationResult",
    "NonFiniteIntegrandError",
    "QuadratureConfig",
    "TailStrategy",
    "integrate_real_line",
    "integrate_semi_infinite",
    "script_E",
    "ShapeFunction",
    "ball_shape",
    "builtin_shape",
    "gaussian_shape",
    "trivial_shape",
    "EIGHT_PI_CUBED",
    "TWO_PI_SQ",
    "ConvergenceRow",
    "Coupling",
    "CouplingConvention",
    "EnergyDensityProfile",
    "Eq4Check",
    "H_lambda",
    "H_prime_lambda",
    "LorentzianShapeAverage",
    "ProfileSample",
    "RadialPoint",
    "convergence_study",
    "energy_density_extended",
    "energy_density_point_closed",
    "energy_density_point_integral",
    "extended_profile",
    "identity_eq4_check",
    "point_profile",
    "resolvent_difference_check",
    "resolvent_identity_check",
    "t_lambda",
    "t_zero",
    "to_alpha",
    "to_alpha_a",
    "to_gamma",
    "__version__",
]
