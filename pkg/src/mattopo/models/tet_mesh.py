"""Tetrahedral mesh data models."""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, List, Tuple

import numpy as np


# Local faces of a positively oriented tet, face k opposite vertex k, wound outward.
LOCAL_FACES: Tuple[Tuple[int, int, int], ...] = ((1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1))
LOCAL_EDGES: Tuple[Tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class FeatureKind(Enum):
    """Sharp edge classification by the sign of the dihedral deviation."""
    CONVEX = "convex"
    CONCAVE = "concave"


class SampleKind(Enum):
    """Origin of a surface sample."""
    SURFACE = "surface"
    FEATURE_EDGE = "feature_edge"
    CORNER = "corner"


@dataclass
class SurfaceTriangle:
    """Boundary triangle of the tet complex."""
    vertices: Tuple[int, int, int]
    tet: int
    face: int
    normal: np.ndarray


@dataclass
class FeatureEdge:
    """Sharp surface edge between two surface triangles."""
    v0: int
    v1: int
    kind: FeatureKind
    triangles: Tuple[int, int] = (-1, -1)

    @property
    def key(self) -> Tuple[int, int]:
        return (min(self.v0, self.v1), max(self.v0, self.v1))


@dataclass
class SurfaceSample:
    """Point on the boundary surface used as a pin or for error checks."""
    position: np.ndarray
    normal: np.ndarray
    kind: SampleKind
    source: int

    @property
    def is_feature(self) -> bool:
        return self.kind in (SampleKind.FEATURE_EDGE, SampleKind.CORNER)


@dataclass(eq=False)
class TetMesh:
    """Volumetric input domain.

    Vertices live in normalized model units; ``scale`` and ``offset`` map them
    back to the input frame via ``world = vertices / scale + offset``.
    """
    vertices: np.ndarray
    tets: np.ndarray
    surface_tris: List[SurfaceTriangle] = field(default_factory=list)
    feature_edges: List[FeatureEdge] = field(default_factory=list)
    corners: List[int] = field(default_factory=list)
    bbox_diag: float = 0.0
    scale: float = 1.0
    offset: np.ndarray = field(default_factory=lambda: np.zeros(3))
    name: str = "mesh"

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_tets(self) -> int:
        return int(self.tets.shape[0])

    def to_world(self, points: np.ndarray) -> np.ndarray:
        """Map normalized coordinates back to the input frame."""
        return np.asarray(points, dtype=float) / self.scale + self.offset

    def to_world_length(self, length):
        return length / self.scale

    def tet_points(self, tet: int) -> np.ndarray:
        return self.vertices[self.tets[tet]]

    @cached_property
    def tet_volumes(self) -> np.ndarray:
        """Signed volume of every tet."""
        p = self.vertices[self.tets]
        a = p[:, 1] - p[:, 0]
        b = p[:, 2] - p[:, 0]
        c = p[:, 3] - p[:, 0]
        return np.einsum("ij,ij->i", a, np.cross(b, c)) / 6.0

    @property
    def volume(self) -> float:
        return float(self.tet_volumes.sum())

    @cached_property
    def _face_table(self) -> Tuple[np.ndarray, np.ndarray]:
        local = self.tets[:, LOCAL_FACES].reshape(-1, 3)
        faces, inverse = np.unique(np.sort(local, axis=1), axis=0, return_inverse=True)
        return faces, inverse.reshape(self.n_tets, 4)

    @property
    def faces(self) -> np.ndarray:
        """Unique faces as sorted vertex triples."""
        return self._face_table[0]

    @property
    def tet_faces(self) -> np.ndarray:
        """Face id of local face k (opposite vertex k) of every tet."""
        return self._face_table[1]

    @cached_property
    def face_valence(self) -> np.ndarray:
        return np.bincount(self.tet_faces.ravel(), minlength=len(self.faces))

    @cached_property
    def face_tets(self) -> np.ndarray:
        """(F, 2) tets sharing each face, -1 where the face is on the boundary."""
        table = np.full((len(self.faces), 2), -1, dtype=np.int64)
        for tet, row in enumerate(self.tet_faces):
            for face in row:
                slot = 0 if table[face, 0] < 0 else 1
                table[face, slot] = tet
        return table

    @cached_property
    def _edge_table(self) -> Tuple[np.ndarray, np.ndarray]:
        local = self.tets[:, LOCAL_EDGES].reshape(-1, 2)
        edges, inverse = np.unique(np.sort(local, axis=1), axis=0, return_inverse=True)
        return edges, inverse.reshape(self.n_tets, 6)

    @property
    def edges(self) -> np.ndarray:
        return self._edge_table[0]

    @property
    def tet_edges(self) -> np.ndarray:
        """Edge id of local edge LOCAL_EDGES[k] of every tet."""
        return self._edge_table[1]

    @cached_property
    def edge_valence(self) -> np.ndarray:
        return np.bincount(self.tet_edges.ravel(), minlength=len(self.edges))

    @cached_property
    def vertex_valence(self) -> np.ndarray:
        return np.bincount(self.tets.ravel(), minlength=self.n_vertices)

    @cached_property
    def surface_by_face(self) -> Dict[int, int]:
        """Global face id -> index into ``surface_tris``."""
        return {tri.face: k for k, tri in enumerate(self.surface_tris)}

    @cached_property
    def surface_faces(self) -> np.ndarray:
        return np.array([tri.vertices for tri in self.surface_tris], dtype=np.int64).reshape(-1, 3)

    @cached_property
    def surface_normals(self) -> np.ndarray:
        return np.array([tri.normal for tri in self.surface_tris], dtype=float).reshape(-1, 3)

    @cached_property
    def surface_areas(self) -> np.ndarray:
        p = self.vertices[self.surface_faces]
        return 0.5 * np.linalg.norm(np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1)

    @property
    def surface_area(self) -> float:
        return float(self.surface_areas.sum())

    @cached_property
    def surface_edge_triangles(self) -> Dict[Tuple[int, int], List[int]]:
        """Sorted surface edge -> surface triangles bounding it."""
        table: Dict[Tuple[int, int], List[int]] = {}
        for k, (a, b, c) in enumerate(self.surface_faces):
            for u, v in ((a, b), (b, c), (c, a)):
                table.setdefault((min(u, v), max(u, v)), []).append(k)
        return table

    @cached_property
    def surface_vertices(self) -> np.ndarray:
        return np.unique(self.surface_faces.ravel())

    @cached_property
    def feature_edge_lookup(self) -> Dict[Tuple[int, int], int]:
        return {edge.key: k for k, edge in enumerate(self.feature_edges)}

    @cached_property
    def surface_index(self):
        """Nearest-surface-point index over the boundary triangles."""
        from ..mesh.proximity import SurfaceIndex

        return SurfaceIndex(self.vertices, self.surface_faces, self.surface_normals)

    @cached_property
    def tet_locator(self):
        """Point location over the tets."""
        from ..mesh.proximity import TetLocator

        return TetLocator(self.vertices, self.tets)

    def contains(self, point: np.ndarray, tol: float = 1e-9) -> bool:
        """Whether ``point`` lies inside the solid (barycentric slack ``tol``)."""
        return self.tet_locator.locate(point, tol=tol) >= 0
