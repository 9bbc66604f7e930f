"""Two-sided Hausdorff error between the input surface and the reconstruction."""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from ..mesh.proximity import SurfaceIndex
from ..models.medial_mesh import MedialMesh, MetricsReport, TriangleMesh
from ..models.tet_mesh import TetMesh


logger = logging.getLogger(__name__)


def boundary_surface(mesh: TetMesh) -> TriangleMesh:
    """The tet mesh boundary as a triangle mesh."""
    return TriangleMesh(vertices=mesh.vertices, faces=mesh.surface_faces)


def sample_triangles(mesh: TriangleMesh, n: int, rng: np.random.Generator) -> np.ndarray:
    """Area-weighted random points on the surface plus every used vertex."""
    areas = mesh.areas
    total = float(areas.sum())
    used = mesh.vertices[np.unique(mesh.faces)]
    if total <= 0 or n <= 0:
        return used
    tris = rng.choice(len(areas), size=n, p=areas / total)
    corners = mesh.vertices[mesh.faces[tris]]
    r1 = np.sqrt(rng.random(n))
    r2 = rng.random(n)
    points = (
        (1.0 - r1)[:, None] * corners[:, 0]
        + (r1 * (1.0 - r2))[:, None] * corners[:, 1]
        + (r1 * r2)[:, None] * corners[:, 2]
    )
    return np.vstack([points, used])


def one_sided(points: np.ndarray, target: TriangleMesh) -> float:
    """Largest distance from ``points`` to the triangles of ``target``."""
    index = SurfaceIndex(target.vertices, target.faces)
    _, distances, _ = index.nearest_many(points)
    return float(distances.max()) if len(distances) else 0.0


def hausdorff(
    mesh_a: TriangleMesh,
    mesh_b: TriangleMesh,
    n_samples: int = 20000,
    seed: int = 0,
) -> Tuple[float, float, float]:
    """(eps1, eps2, eps_max) in percent of the bbox diagonal of ``mesh_a``.

    eps1 measures from ``mesh_a`` to ``mesh_b``, eps2 the other way.
    """
    if not mesh_a.n_faces or not mesh_b.n_faces:
        raise ValueError("Hausdorff distance needs two nonempty meshes")
    rng = np.random.default_rng(seed)
    diag = mesh_a.bbox_diag
    eps1 = one_sided(sample_triangles(mesh_a, n_samples, rng), mesh_b) / diag * 100.0
    eps2 = one_sided(sample_triangles(mesh_b, n_samples, rng), mesh_a) / diag * 100.0
    return eps1, eps2, max(eps1, eps2)


def compute_metrics(
    mesh: TetMesh,
    medial: MedialMesh,
    reconstruction: Optional[TriangleMesh],
    n_samples: int = 20000,
    seed: int = 0,
    timings: Optional[Dict[str, float]] = None,
) -> MetricsReport:
    """Metrics of a finished run; Hausdorff errors are None without a reconstruction."""
    eps1 = eps2 = None
    if reconstruction is not None and reconstruction.n_faces:
        eps1, eps2, _ = hausdorff(boundary_surface(mesh), reconstruction, n_samples, seed)
    report = MetricsReport(
        eps1=eps1, eps2=eps2, euler=medial.euler, n_spheres=medial.n_spheres, timings=dict(timings or {}),
    )
    if report.eps_max is None:
        logger.info(f"Metrics: no reconstruction, E={report.euler} #s={report.n_spheres}")
    else:
        logger.info(
            f"Metrics: eps1={report.eps1:.4g}% eps2={report.eps2:.4g}% eps_max={report.eps_max:.4g}% "
            f"E={report.euler} #s={report.n_spheres}"
        )
    return report
