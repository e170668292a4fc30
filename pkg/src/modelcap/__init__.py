"""Capacities, cutoff energies and divergence conditions on rotationally
symmetric model manifolds ``dt^2 + h(t)^2 dtheta^2``."""

from .capacity import (
    CapacityBounds,
    ParabolicityVerdict,
    cap_exact_model,
    cap_upper_surface,
    cap_upper_volume,
    capacity_bounds,
    classify_parabolicity,
)
from .geometry import (
    EvansPotential,
    Exponent,
    GeodesicRadius,
    ModelManifold,
    a_p,
    a_p_integral,
    area,
    b_p,
    cusp,
    cylinder,
    euclidean,
    evans_potential,
    hyperbolic,
    parse_manifold,
    sphere_area,
    volume,
)
from .numerics import QuadratureConfig, QuadratureError, TailModel, integrate, integrate_improper
from .profiles import BreakpointError, DomainError, ProfileParseError, RadialProfile, WarpingProfile

__version__ = "0.1.0"

__all__ = [
    "BreakpointError",
    "CapacityBounds",
    "DomainError",
    "EvansPotential",
    "Exponent",
    "GeodesicRadius",
    "ModelManifold",
    "ParabolicityVerdict",
    "ProfileParseError",
    "QuadratureConfig",
    "QuadratureError",
    "RadialProfile",
    "TailModel",
    "WarpingProfile",
    "a_p",
    "a_p_integral",
    "area",
    "b_p",
    "cap_exact_model",
    "cap_upper_surface",
    "cap_upper_volume",
    "capacity_bounds",
    "classify_parabolicity",
    "cusp",
    "cylinder",
    "euclidean",
    "evans_potential",
    "hyperbolic",
    "integrate",
    "integrate_improper",
    "parse_manifold",
    "sphere_area",
    "volume",
]
