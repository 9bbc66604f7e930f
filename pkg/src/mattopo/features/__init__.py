"""External and internal medial feature preservation."""

from .external import concave_edge_spheres, convex_segments, feature_coverage, preserve_external_features
from .internal import (
    NormalCluster,
    check_internal_feature_pair,
    cluster_normals,
    clusters_match,
    medial_edges,
    preserve_internal_features,
)

__all__ = [
    "concave_edge_spheres",
    "convex_segments",
    "feature_coverage",
    "preserve_external_features",
    "NormalCluster",
    "check_internal_feature_pair",
    "cluster_normals",
    "clusters_match",
    "medial_edges",
    "preserve_internal_features",
]
