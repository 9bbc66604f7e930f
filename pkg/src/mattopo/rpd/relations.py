"""Tet-sphere relation filter.

A tet relates to sphere i when, for every neighbor j, at least one tet
vertex is power-closer to i than to j. Any tet meeting the restricted cell
of i passes, so the filter may over-include but never drops a cell.
"""

from typing import Dict, Iterable, Mapping, Set

import numpy as np

from ..models.sphere import MedialSphere
from ..models.tet_mesh import TetMesh


def plane_distances(mi: MedialSphere, others: Iterable[MedialSphere], points: np.ndarray) -> np.ndarray:
    """(P, J) signed distances to the radical planes; positive on the side of ``mi``."""
    others = list(others)
    centers = np.array([m.center for m in others]).reshape(-1, 3)
    weights = np.array([m.weight for m in others])
    u = centers - mi.center
    lengths = np.linalg.norm(u, axis=1)
    mids = 0.5 * (centers + mi.center)
    # (u . (mid - x)) / |u| + (w_i - w_j) / (2 |u|)
    offset = np.einsum("ji,ji->j", u, mids) / lengths + (mi.weight - weights) / (2.0 * lengths)
    return offset[None, :] - (points @ u.T) / lengths[None, :]


def tet_relates_to_sphere(
    mesh: TetMesh,
    mi: MedialSphere,
    neighbors: Iterable[MedialSphere],
    tet: int,
    eps: float = 0.0,
) -> bool:
    """Counter test over the neighbors of ``mi`` for one tet."""
    neighbors = list(neighbors)
    if not neighbors:
        return True
    s = plane_distances(mi, neighbors, mesh.tet_points(tet))
    counter = int(np.count_nonzero((s >= -eps).any(axis=0)))
    return counter == len(neighbors)


def related_tets(
    mesh: TetMesh,
    mi: MedialSphere,
    neighbors: Iterable[MedialSphere],
    eps: float = 0.0,
    chunk: int = 64,
) -> np.ndarray:
    """Indices of all tets related to ``mi``, vectorized over tets."""
    neighbors = sorted(neighbors, key=lambda m: m.id)
    if not neighbors:
        return np.arange(mesh.n_tets)
    related = np.ones(mesh.n_tets, dtype=bool)
    for start in range(0, len(neighbors), chunk):
        block = neighbors[start:start + chunk]
        vertex_ok = plane_distances(mi, block, mesh.vertices) >= -eps
        per_tet = vertex_ok[mesh.tets].any(axis=1)
        related &= per_tet.all(axis=1)
    return np.flatnonzero(related)


def build_relations(
    mesh: TetMesh,
    spheres: Mapping[int, MedialSphere],
    neighbors: Mapping[int, Set[int]],
    sphere_ids: Iterable[int],
    eps: float = 0.0,
) -> Dict[int, np.ndarray]:
    """Sphere id -> related tet indices for the given spheres."""
    return {
        i: related_tets(mesh, spheres[i], [spheres[j] for j in neighbors.get(i, ())], eps)
        for i in sorted(sphere_ids)
    }
