"""Medial sphere generation and bookkeeping."""

from .feature import make_feature_sphere
from .power import power_distance, power_distances, power_nearest
from .registry import SphereRegistry, read_sph, write_sph
from .shrink import ShrinkParams, sphere_shrink
from .tn import optimize_tn_sphere, tangency_residual

__all__ = [
    "make_feature_sphere",
    "power_distance",
    "power_distances",
    "power_nearest",
    "SphereRegistry",
    "read_sph",
    "write_sph",
    "ShrinkParams",
    "sphere_shrink",
    "optimize_tn_sphere",
    "tangency_residual",
]
