"""Input tet mesh loading, annotation, sampling and spatial queries."""

from .builder import build_tet_mesh, renormalized
from .features import (
    apply_feature_annotations,
    convex_corners,
    detect_features,
    feature_polylines,
    segment_polylines,
)
from .readers import get_reader_factory, load_tet_mesh, read_feature_file, write_tet_mesh
from .sampling import farthest_point_pins, random_pins, sample_density_for, sample_surface
from .topology import mesh_euler, solid_euler_from_surface, surface_euler

__all__ = [
    "build_tet_mesh",
    "renormalized",
    "apply_feature_annotations",
    "convex_corners",
    "detect_features",
    "feature_polylines",
    "segment_polylines",
    "get_reader_factory",
    "load_tet_mesh",
    "read_feature_file",
    "write_tet_mesh",
    "farthest_point_pins",
    "random_pins",
    "sample_density_for",
    "sample_surface",
    "mesh_euler",
    "solid_euler_from_surface",
    "surface_euler",
]
