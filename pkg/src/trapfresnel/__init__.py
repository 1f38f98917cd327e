"""Fresnel integrals by truncated, pole-corrected trapezium rules."""

from .bounds import (
    BoundBreakdown,
    BoundConstants,
    constants,
    delta_bound,
    erfc_bounds,
    eta,
    F_lower_bound,
    hr_bound,
    maclaurin_coeff_bound,
    pointwise_rel_bound,
    small_x_bounds,
    strip_bound,
    tail_bound,
    uniform_bounds,
)
from .core import (
    DEFAULT_N,
    FresnelPair,
    QuadratureRule,
    aux_ab,
    boundary_term,
    convert_F_CS,
    edge_ratios,
    fresnel_CS,
    fresnel_F,
    fresnel_F_complex,
    hunter_regan_F,
    make_rule,
    plain_trapezium_F,
)
from .errors import (
    ConstructionError,
    ConvergenceError,
    DomainError,
    FresnelError,
    InvalidInputError,
    InvalidParameterError,
    PoleProximityError,
    SingularityError,
)
from .harness import SweepConfig
from .oracles import cs_power_series, erfc_weideman, quad_F, weideman_F, weideman_w

__all__ = [
    "BoundBreakdown", "BoundConstants", "ConstructionError", "ConvergenceError",
    "DEFAULT_N", "DomainError", "F_lower_bound", "FresnelError", "FresnelPair",
    "InvalidInputError", "InvalidParameterError", "PoleProximityError",
    "QuadratureRule", "SingularityError", "SweepConfig", "aux_ab", "boundary_term",
    "constants", "convert_F_CS", "cs_power_series", "delta_bound", "edge_ratios",
    "erfc_bounds", "erfc_weideman", "eta", "fresnel_CS", "fresnel_F",
    "fresnel_F_complex", "hr_bound", "hunter_regan_F", "maclaurin_coeff_bound",
    "make_rule", "plain_trapezium_F", "pointwise_rel_bound", "quad_F",
    "small_x_bounds", "strip_bound", "tail_bound", "uniform_bounds", "weideman_F",
    "weideman_w",
]
