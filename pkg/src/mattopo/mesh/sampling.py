"""Random surface sampling and initial pin selection."""

import logging
import math
from typing import List, Optional

import numpy as np

from ..models.tet_mesh import SampleKind, SurfaceSample, TetMesh


logger = logging.getLogger(__name__)


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    return v / n if n > 0 else v


def auto_density(mesh: TetMesh, target_samples: int) -> float:
    """Density giving ``target_samples`` expected interior samples."""
    return target_samples / mesh.surface_area


def sample_surface(mesh: TetMesh, density: float, seed: int = 0) -> List[SurfaceSample]:
    """Area-weighted random samples plus feature-edge and corner samples.

    Interior samples come first (Poisson count per triangle), then evenly
    spaced samples along each feature edge, then one sample per corner.
    """
    if density <= 0:
        raise ValueError("Sample density must be positive")
    rng = np.random.default_rng(seed)
    samples: List[SurfaceSample] = []

    counts = rng.poisson(density * mesh.surface_areas)
    tri_ids = np.repeat(np.arange(len(counts)), counts)
    if tri_ids.size:
        corners = mesh.vertices[mesh.surface_faces[tri_ids]]
        r1 = np.sqrt(rng.random(tri_ids.size))
        r2 = rng.random(tri_ids.size)
        points = (
            (1.0 - r1)[:, None] * corners[:, 0]
            + (r1 * (1.0 - r2))[:, None] * corners[:, 1]
            + (r1 * r2)[:, None] * corners[:, 2]
        )
        for tri, point in zip(tri_ids, points):
            samples.append(SurfaceSample(
                position=point, normal=mesh.surface_normals[tri].copy(), kind=SampleKind.SURFACE, source=int(tri),
            ))

    linear_density = math.sqrt(density)
    for k, edge in enumerate(mesh.feature_edges):
        a = mesh.vertices[edge.v0]
        b = mesh.vertices[edge.v1]
        n = max(1, int(math.ceil(np.linalg.norm(b - a) * linear_density)))
        normal = _unit(mesh.surface_normals[edge.triangles[0]] + mesh.surface_normals[edge.triangles[1]])
        for i in range(n):
            t = (i + 0.5) / n
            samples.append(SurfaceSample(
                position=a + t * (b - a), normal=normal.copy(), kind=SampleKind.FEATURE_EDGE, source=k,
            ))

    if mesh.corners:
        weighted = np.zeros_like(mesh.vertices)
        contribution = mesh.surface_normals * mesh.surface_areas[:, None]
        for j in range(3):
            np.add.at(weighted, mesh.surface_faces[:, j], contribution)
        for v in mesh.corners:
            samples.append(SurfaceSample(
                position=mesh.vertices[v].copy(), normal=_unit(weighted[v]), kind=SampleKind.CORNER, source=int(v),
            ))

    logger.debug(f"Sampled {len(samples)} surface points ({int(counts.sum())} interior) at density {density:.3g}")
    return samples


def _pin_candidates(mesh: TetMesh, samples: List[SurfaceSample]) -> List[SurfaceSample]:
    interior = [s for s in samples if s.kind is SampleKind.SURFACE]
    if interior:
        return interior
    centroids = mesh.vertices[mesh.surface_faces].mean(axis=1)
    return [
        SurfaceSample(position=c, normal=mesh.surface_normals[k].copy(), kind=SampleKind.SURFACE, source=k)
        for k, c in enumerate(centroids)
    ]


def farthest_point_pins(
    mesh: TetMesh,
    samples: List[SurfaceSample],
    n: int,
    rng: np.random.Generator,
) -> List[SurfaceSample]:
    """Seeded farthest-point subset of the interior samples."""
    candidates = _pin_candidates(mesh, samples)
    n = min(n, len(candidates))
    points = np.array([s.position for s in candidates])
    chosen = [int(rng.integers(len(candidates)))]
    dist = np.linalg.norm(points - points[chosen[0]], axis=1)
    while len(chosen) < n:
        nxt = int(np.argmax(dist))
        chosen.append(nxt)
        dist = np.minimum(dist, np.linalg.norm(points - points[nxt], axis=1))
    return [candidates[k] for k in chosen]


def random_pins(
    mesh: TetMesh,
    samples: List[SurfaceSample],
    n: int,
    rng: np.random.Generator,
) -> List[SurfaceSample]:
    """Uniformly random subset of the interior samples."""
    candidates = _pin_candidates(mesh, samples)
    picks = rng.choice(len(candidates), size=min(n, len(candidates)), replace=False)
    return [candidates[int(k)] for k in picks]


def sample_density_for(mesh: TetMesh, density: Optional[float], target_samples: int) -> float:
    return density if density is not None else auto_density(mesh, target_samples)
