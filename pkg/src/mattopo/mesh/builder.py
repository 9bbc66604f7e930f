"""Validation, normalization and boundary extraction for tet meshes."""

import logging
from typing import Optional

import numpy as np

from ..errors import MeshLoadError
from ..models.tet_mesh import LOCAL_FACES, SurfaceTriangle, TetMesh


logger = logging.getLogger(__name__)

NORMALIZED_EXTENT = 1000.0


def _summarize(indices: np.ndarray, limit: int = 10) -> str:
    shown = ", ".join(str(int(i)) for i in indices[:limit])
    if len(indices) > limit:
        shown += f", ... ({len(indices)} total)"
    return shown


def build_tet_mesh(
    vertices: np.ndarray,
    tets: np.ndarray,
    normalize: bool = True,
    name: str = "mesh",
) -> TetMesh:
    """Validate raw arrays and return a TetMesh with its boundary extracted.

    With ``normalize`` the vertices are rescaled into [0, 1000]^3 preserving
    the aspect ratio; the transform is recorded on the mesh.
    """
    vertices = np.asarray(vertices, dtype=float)
    tets = np.asarray(tets, dtype=np.int64)

    if vertices.ndim != 2 or vertices.shape[1] != 3 or len(vertices) < 4:
        raise MeshLoadError(f"Expected at least 4 vertices of shape (n, 3), got {vertices.shape}")
    if tets.ndim != 2 or tets.shape[1] != 4 or len(tets) == 0:
        raise MeshLoadError(f"Expected tets of shape (m, 4), got {tets.shape}")
    if not np.all(np.isfinite(vertices)):
        raise MeshLoadError("Vertex coordinates must be finite")
    if tets.min() < 0 or tets.max() >= len(vertices):
        raise MeshLoadError("Tet references a vertex index out of range")

    sorted_tets = np.sort(tets, axis=1)
    repeated = np.nonzero(np.any(sorted_tets[:, 1:] == sorted_tets[:, :-1], axis=1))[0]
    if repeated.size:
        raise MeshLoadError(f"Degenerate tets with repeated vertices: {_summarize(repeated)}")

    _, first, counts = np.unique(sorted_tets, axis=0, return_index=True, return_counts=True)
    if np.any(counts > 1):
        raise MeshLoadError(f"non-manifold boundary: duplicated tets {_summarize(np.sort(first[counts > 1]))}")

    scale = 1.0
    offset = np.zeros(3)
    if normalize:
        used = vertices[np.unique(tets)]
        lo = used.min(axis=0)
        extent = float((used.max(axis=0) - lo).max())
        if extent <= 0:
            raise MeshLoadError("Mesh has zero extent")
        scale = NORMALIZED_EXTENT / extent
        offset = lo
        vertices = (vertices - lo) * scale

    used = vertices[np.unique(tets)]
    bbox_diag = float(np.linalg.norm(used.max(axis=0) - used.min(axis=0)))
    mesh = TetMesh(vertices=vertices, tets=tets, bbox_diag=bbox_diag, scale=scale, offset=offset, name=name)

    volumes = mesh.tet_volumes
    inverted = np.nonzero(volumes <= 1e-14 * bbox_diag ** 3)[0]
    if inverted.size:
        raise MeshLoadError(f"Inverted or flat tets: {_summarize(inverted)}")

    valence = mesh.face_valence
    if np.any(valence > 2):
        bad = np.nonzero(valence > 2)[0]
        raise MeshLoadError(f"non-manifold boundary: faces shared by more than two tets: {_summarize(bad)}")

    mesh.surface_tris = extract_surface(mesh)
    if not mesh.surface_tris:
        raise MeshLoadError("non-manifold boundary: mesh has no boundary faces")

    for edge, tris in mesh.surface_edge_triangles.items():
        if len(tris) != 2:
            raise MeshLoadError(f"non-manifold boundary: surface edge {edge} bounds {len(tris)} triangles")

    logger.info(
        f"Built mesh '{name}': {mesh.n_vertices} vertices, {mesh.n_tets} tets, "
        f"{len(mesh.surface_tris)} surface triangles, diag {bbox_diag:.3f}"
    )
    return mesh


def extract_surface(mesh: TetMesh) -> list:
    """Boundary faces, wound outward, in face-id order."""
    surface = []
    valence = mesh.face_valence
    tet_faces = mesh.tet_faces
    tet_ids, local = np.nonzero(valence[tet_faces] == 1)
    order = np.argsort(tet_faces[tet_ids, local], kind="stable")
    for tet, k in zip(tet_ids[order], local[order]):
        tri = tuple(int(v) for v in mesh.tets[tet][list(LOCAL_FACES[k])])
        p = mesh.vertices[list(tri)]
        normal = np.cross(p[1] - p[0], p[2] - p[0])
        length = np.linalg.norm(normal)
        normal = normal / length if length > 0 else normal
        surface.append(SurfaceTriangle(vertices=tri, tet=int(tet), face=int(tet_faces[tet, k]), normal=normal))
    return surface


def renormalized(mesh: TetMesh, name: Optional[str] = None) -> TetMesh:
    """Rebuild ``mesh`` from its world coordinates with normalization on."""
    return build_tet_mesh(mesh.to_world(mesh.vertices), mesh.tets, normalize=True, name=name or mesh.name)
