"""Volumetric restricted power diagram."""

from .cell import ConvexCell, clip_cell, inherit_payloads
from .engine import RpdState, compute_rpd, compute_rpd_partial, new_rpd_state, validate_euler
from .export import export_rpd, rpd_summary
from .halfspace import HalfSpace, PlaneKind, radical_plane, tet_face_halfspaces
from .neighbors import compute_sphere_neighbors, validate_neighbors
from .relations import build_relations, related_tets, tet_relates_to_sphere

__all__ = [
    "ConvexCell",
    "clip_cell",
    "inherit_payloads",
    "RpdState",
    "compute_rpd",
    "compute_rpd_partial",
    "new_rpd_state",
    "validate_euler",
    "export_rpd",
    "rpd_summary",
    "HalfSpace",
    "PlaneKind",
    "radical_plane",
    "tet_face_halfspaces",
    "compute_sphere_neighbors",
    "validate_neighbors",
    "build_relations",
    "related_tets",
    "tet_relates_to_sphere",
]
