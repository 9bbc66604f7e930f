"""Zero-radius spheres pinned on sharp edges and corners."""

import numpy as np

from ..errors import SphereGenerationError
from ..mesh.proximity import closest_points_on_segments
from ..models.sphere import MedialSphere, SphereKind
from ..models.tet_mesh import TetMesh


def make_feature_sphere(mesh: TetMesh, position: np.ndarray, kind: SphereKind, sphere_id: int = -1) -> MedialSphere:
    """Zero-radius sphere at a point of a detected feature edge or corner."""
    if not kind.is_feature:
        raise SphereGenerationError(f"Feature spheres are edge or corner spheres, not {kind.value}")
    position = np.asarray(position, dtype=float)
    tol = 1e-6 * mesh.bbox_diag

    if kind is SphereKind.CORNER:
        if not mesh.corners:
            raise SphereGenerationError("Mesh has no corners")
        dist = np.linalg.norm(mesh.vertices[mesh.corners] - position, axis=1)
        if dist.min() > tol:
            raise SphereGenerationError(f"Position {position.tolist()} is not a corner")
    else:
        if not mesh.feature_edges:
            raise SphereGenerationError("Mesh has no feature edges")
        a = mesh.vertices[[e.v0 for e in mesh.feature_edges]]
        b = mesh.vertices[[e.v1 for e in mesh.feature_edges]]
        closest = closest_points_on_segments(position, a, b)
        if np.linalg.norm(closest - position, axis=1).min() > tol:
            raise SphereGenerationError(f"Position {position.tolist()} is not on a feature edge")

    return MedialSphere(id=sphere_id, center=position, radius=0.0, kind=kind, n_tangent=0)
