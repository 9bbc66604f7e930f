"""Envelope distances and the geometric error bound."""

from .checker import GeometryStats, feature_primitives, geometry_check_and_insert, nearest_envelope_distances
from .envelope import (
    EnvelopePrimitive,
    PrimitiveKind,
    envelope_distance,
    envelope_distance_numeric,
    envelope_primitives,
    signed_distance,
)

__all__ = [
    "GeometryStats",
    "feature_primitives",
    "geometry_check_and_insert",
    "nearest_envelope_distances",
    "EnvelopePrimitive",
    "PrimitiveKind",
    "envelope_distance",
    "envelope_distance_numeric",
    "envelope_primitives",
    "signed_distance",
]
