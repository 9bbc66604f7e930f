"""Geometric error bound: insert spheres where the envelope misses the surface."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from ..errors import SphereGenerationError
from ..models.medial_mesh import MedialMesh
from ..models.sphere import MedialSphere, SphereKind
from ..models.tet_mesh import FeatureKind, SampleKind, SurfaceSample, TetMesh
from ..spheres.feature import make_feature_sphere
from ..spheres.shrink import ShrinkParams, sphere_shrink
from .envelope import EnvelopePrimitive, PrimitiveKind, envelope_primitives, sphere_signed


logger = logging.getLogger(__name__)


@dataclass
class GeometryStats:
    """Sample distances to the envelope in percent of the bbox diagonal.

    Samples with no primitive of their class to measure against are counted
    in ``n_unmeasured`` and left out of the distances, which are None when
    nothing could be measured.
    """
    max_distance: Optional[float] = 0.0
    mean_distance: Optional[float] = 0.0
    n_samples: int = 0
    n_violations: int = 0
    n_inserted: int = 0
    n_unmeasured: int = 0

    def to_dict(self):
        """Convert to dictionary for serialization."""
        return {
            "max_distance": self.max_distance,
            "mean_distance": self.mean_distance,
            "n_samples": self.n_samples,
            "n_violations": self.n_violations,
            "n_inserted": self.n_inserted,
            "n_unmeasured": self.n_unmeasured,
        }


def nearest_envelope_distances(points: np.ndarray, prims: Sequence[EnvelopePrimitive]) -> np.ndarray:
    """Unsigned distance of every point to the closest primitive.

    Sphere primitives seed an upper bound; cones and slabs are then only
    evaluated on the points their bounding ball can still improve.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    best = np.full(len(points), np.inf)
    if not len(points) or not prims:
        return best
    tree = cKDTree(points)
    spheres = [p for p in prims if p.kind is PrimitiveKind.SPHERE]
    for prim in spheres:
        best = np.minimum(best, sphere_signed(points, prim.centers[0], prim.radii[0]))
    for prim in prims:
        if prim.kind is PrimitiveKind.SPHERE:
            continue
        center, reach = prim.bounding_ball()
        cap = float(best.max())
        if np.isfinite(cap):
            candidates = np.asarray(tree.query_ball_point(center, reach + max(cap, 0.0)), dtype=np.int64)
        else:
            candidates = np.arange(len(points))
        if not candidates.size:
            continue
        lower = np.linalg.norm(points[candidates] - center, axis=1) - reach
        candidates = candidates[lower < best[candidates]]
        if candidates.size:
            best[candidates] = np.minimum(best[candidates], prim.signed(points[candidates]))
    return np.maximum(best, 0.0)


def feature_primitives(medial: MedialMesh) -> List[EnvelopePrimitive]:
    """Zero-radius feature spheres and the cones between consecutive ones."""
    spheres = medial.spheres
    prims = [EnvelopePrimitive.from_spheres([spheres[v]]) for v in medial.vertices if spheres[v].kind.is_feature]
    prims += [EnvelopePrimitive.from_spheres([spheres[a], spheres[b]]) for a, b in medial.feature_edges()]
    return prims


def _percent(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.3g}%"


def _is_feature_sample(mesh: TetMesh, sample: SurfaceSample) -> bool:
    if sample.kind is SampleKind.FEATURE_EDGE:
        return mesh.feature_edges[sample.source].kind is FeatureKind.CONVEX
    return sample.kind is SampleKind.CORNER


def _new_sphere(mesh: TetMesh, sample: SurfaceSample, feature: bool, params: Optional[ShrinkParams]) -> MedialSphere:
    if feature:
        kind = SphereKind.CORNER if sample.kind is SampleKind.CORNER else SphereKind.FEATURE_EDGE
        return make_feature_sphere(mesh, sample.position, kind)
    return sphere_shrink(mesh, sample, params)


def geometry_check_and_insert(
    mesh: TetMesh,
    medial: MedialMesh,
    samples: Sequence[SurfaceSample],
    delta_eps: float,
    params: Optional[ShrinkParams] = None,
    max_insert: int = 256,
) -> Tuple[List[MedialSphere], GeometryStats]:
    """New spheres at the samples farthest outside the envelope, at most ``max_insert``.

    Feature samples are measured against feature spheres and cones and get
    a zero-radius sphere; other samples are measured against every
    primitive and get a shrink sphere pinned there. After each insertion the
    remaining violators are re-measured against the new sphere.
    """
    stats = GeometryStats(n_samples=len(samples))
    if not samples:
        return [], stats
    scale = 100.0 / mesh.bbox_diag
    points = np.array([s.position for s in samples])
    is_feature = np.array([_is_feature_sample(mesh, s) for s in samples])

    distance = np.empty(len(samples))
    if (~is_feature).any():
        distance[~is_feature] = nearest_envelope_distances(points[~is_feature], envelope_primitives(medial))
    if is_feature.any():
        distance[is_feature] = nearest_envelope_distances(points[is_feature], feature_primitives(medial))

    percent = distance * scale
    measured = np.isfinite(percent)
    stats.n_unmeasured = int(np.count_nonzero(~measured))
    stats.max_distance = float(percent[measured].max()) if measured.any() else None
    stats.mean_distance = float(percent[measured].mean()) if measured.any() else None
    violators = np.flatnonzero(percent > delta_eps)
    stats.n_violations = int(violators.size)
    if not violators.size:
        return [], stats

    order = violators[np.argsort(-percent[violators], kind="stable")]
    remaining = percent.copy()
    inserted: List[MedialSphere] = []
    for k in order:
        if len(inserted) >= max_insert:
            break
        if remaining[k] <= delta_eps:
            continue
        try:
            sphere = _new_sphere(mesh, samples[k], bool(is_feature[k]), params)
        except SphereGenerationError as exc:
            logger.warning(f"Geometry insertion at sample {k} skipped: {exc}")
            continue
        inserted.append(sphere)
        # a new sphere only serves samples of its own class
        same = is_feature if sphere.kind.is_feature else ~is_feature
        reach = np.maximum(sphere_signed(points, sphere.center, sphere.radius), 0.0) * scale
        remaining = np.where(same, np.minimum(remaining, reach), remaining)
        remaining[k] = 0.0

    stats.n_inserted = len(inserted)
    logger.info(
        f"Geometry: max {_percent(stats.max_distance)}, mean {_percent(stats.mean_distance)}, "
        f"{stats.n_violations} violations ({stats.n_unmeasured} unmeasured), {len(inserted)} new spheres"
    )
    return inserted, stats
