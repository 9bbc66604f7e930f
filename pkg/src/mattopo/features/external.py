"""External features: zero-radius spheres on convex sharp edges and corners."""

import logging
from typing import Iterable, List, Optional, Sequence

import numpy as np

from ..errors import SphereGenerationError
from ..mesh.features import convex_corners, feature_polylines, segment_polylines
from ..models.config import FeatureConfig
from ..models.features import FeatureCoverage, FeatureSegment
from ..models.sphere import MedialSphere, SphereKind
from ..models.tet_mesh import FeatureKind, SampleKind, SurfaceSample, TetMesh
from ..spheres.feature import make_feature_sphere
from ..spheres.power import power_distances
from ..spheres.shrink import ShrinkParams, sphere_shrink


logger = logging.getLogger(__name__)


def convex_segments(mesh: TetMesh, config: Optional[FeatureConfig] = None) -> List[FeatureSegment]:
    config = config or FeatureConfig()
    return segment_polylines(
        mesh, feature_polylines(mesh), config.segment_ratio * mesh.bbox_diag, kinds=(FeatureKind.CONVEX,),
    )


def feature_coverage(spheres: Sequence[MedialSphere], segments: Sequence[FeatureSegment]) -> FeatureCoverage:
    """Owner of every segment midpoint by power distance."""
    coverage = FeatureCoverage()
    if not segments or not spheres:
        coverage.uncovered = [s.key for s in segments]
        return coverage
    centers = np.array([s.center for s in spheres])
    radii = np.array([s.radius for s in spheres])
    owners = np.argmin(power_distances(centers, radii, np.array([s.midpoint for s in segments])), axis=1)
    for segment, k in zip(segments, owners):
        owner = spheres[int(k)]
        coverage.sharp_edge_segments[segment.key] = owner.id
        if not owner.kind.is_feature:
            coverage.uncovered.append(segment.key)
    return coverage


def _has_sphere_at(spheres: Iterable[MedialSphere], position: np.ndarray, tol: float) -> bool:
    return any(s.kind.is_feature and np.linalg.norm(s.center - position) <= tol for s in spheres)


def preserve_external_features(
    spheres: Sequence[MedialSphere],
    mesh: TetMesh,
    config: Optional[FeatureConfig] = None,
    segments: Optional[Sequence[FeatureSegment]] = None,
) -> List[MedialSphere]:
    """Corner spheres where missing, then edge spheres on uncovered segments.

    Segments are walked in order; each new edge sphere joins the candidate
    owners of the segments after it, so one insertion may cover several.
    """
    config = config or FeatureConfig()
    tol = 1e-6 * mesh.bbox_diag
    spheres = [s for s in spheres if s.is_active]
    new: List[MedialSphere] = []

    for v in convex_corners(mesh):
        position = mesh.vertices[v]
        if not _has_sphere_at(spheres + new, position, tol):
            new.append(make_feature_sphere(mesh, position, SphereKind.CORNER))

    segments = list(segments) if segments is not None else convex_segments(mesh, config)
    if not segments:
        if new:
            logger.info(f"External features: {len(new)} corner spheres")
        return new

    pool = spheres + new
    centers = np.array([s.center for s in pool]).reshape(-1, 3)
    radii = np.array([s.radius for s in pool])
    is_feature = np.array([s.kind.is_feature for s in pool], dtype=bool)
    n_corner = len(new)
    for segment in segments:
        power = power_distances(centers, radii, segment.midpoint[None, :])[0] if len(centers) else np.array([])
        if power.size and is_feature[int(np.argmin(power))]:
            continue
        try:
            sphere = make_feature_sphere(mesh, segment.midpoint, SphereKind.FEATURE_EDGE)
        except SphereGenerationError as exc:
            logger.warning(f"Edge sphere at segment {segment.key} skipped: {exc}")
            continue
        new.append(sphere)
        centers = np.vstack([centers, sphere.center])
        radii = np.append(radii, 0.0)
        is_feature = np.append(is_feature, True)

    if new:
        logger.info(f"External features: {n_corner} corner and {len(new) - n_corner} edge spheres")
    return new


def concave_edge_spheres(
    mesh: TetMesh,
    config: Optional[FeatureConfig] = None,
    params: Optional[ShrinkParams] = None,
) -> List[MedialSphere]:
    """Shrink spheres pinned just inside both faces of every concave segment.

    The pins sit on the two triangles meeting at the edge, offset from it,
    so the resulting spheres are tangent on either side of the crease.
    """
    config = config or FeatureConfig()
    segments = segment_polylines(
        mesh, feature_polylines(mesh), config.segment_ratio * mesh.bbox_diag, kinds=(FeatureKind.CONCAVE,),
    )
    new: List[MedialSphere] = []
    for segment in segments:
        edge = mesh.feature_edges[segment.edge]
        for tri in edge.triangles:
            centroid = mesh.vertices[mesh.surface_faces[tri]].mean(axis=0)
            toward = centroid - segment.midpoint
            length = float(np.linalg.norm(toward))
            if length <= 0:
                continue
            offset = min(0.25 * config.segment_ratio * mesh.bbox_diag, 0.5 * length)
            pin = SurfaceSample(
                position=segment.midpoint + offset * toward / length,
                normal=mesh.surface_normals[tri].copy(), kind=SampleKind.SURFACE, source=int(tri),
            )
            try:
                new.append(sphere_shrink(mesh, pin, params))
            except SphereGenerationError as exc:
                logger.warning(f"Concave pin at segment {segment.key} skipped: {exc}")
    if new:
        logger.info(f"Concave features: {len(new)} spheres on {len(segments)} segments")
    return new
