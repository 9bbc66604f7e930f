"""Medial mesh, surface mesh and metrics data models."""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .sphere import MedialSphere


Edge = Tuple[int, int]
Face = Tuple[int, int, int]
Tet = Tuple[int, int, int, int]


def _key(ids) -> tuple:
    return tuple(sorted(int(i) for i in ids))


@dataclass
class MedialMesh:
    """Non-manifold complex of sphere vertices, edges and triangles.

    Simplices are sorted tuples of sphere ids. ``tets`` holds dual tets
    until thinning removes them.
    """
    spheres: Dict[int, MedialSphere] = field(default_factory=dict)
    vertices: List[int] = field(default_factory=list)
    edges: List[Edge] = field(default_factory=list)
    faces: List[Face] = field(default_factory=list)
    tets: List[Tet] = field(default_factory=list)
    tets_pruned: int = 0

    def __post_init__(self):
        """Canonicalize and deduplicate simplices."""
        self.vertices = sorted(set(int(v) for v in self.vertices))
        self.edges = sorted(set(_key(e) for e in self.edges))
        self.faces = sorted(set(_key(f) for f in self.faces))
        self.tets = sorted(set(_key(t) for t in self.tets))
        for simplex in self.edges + self.faces + self.tets:
            if len(set(simplex)) != len(simplex):
                raise ValueError(f"Degenerate simplex {simplex}")

    @property
    def euler(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces) - len(self.tets)

    @property
    def n_spheres(self) -> int:
        return len(self.vertices)

    def sphere(self, sphere_id: int) -> MedialSphere:
        return self.spheres[sphere_id]

    def is_closed(self) -> bool:
        """Every face's edges and every edge's vertices are present."""
        vertices, edges, faces = set(self.vertices), set(self.edges), set(self.faces)
        if any(v not in vertices for e in self.edges for v in e):
            return False
        if any(e not in edges for f in self.faces for e in combinations(f, 2)):
            return False
        return all(f in faces for t in self.tets for f in combinations(t, 3))

    def restore_closure(self) -> None:
        """Add missing lower-dimensional faces."""
        faces = set(self.faces)
        for t in self.tets:
            faces.update(combinations(t, 3))
        edges = set(self.edges)
        for f in faces:
            edges.update(combinations(f, 2))
        vertices = set(self.vertices)
        for e in edges:
            vertices.update(e)
        self.faces = sorted(faces)
        self.edges = sorted(edges)
        self.vertices = sorted(vertices)

    def neighbors(self, sphere_id: int) -> List[int]:
        return sorted({b if a == sphere_id else a for a, b in self.edges if sphere_id in (a, b)})

    def feature_edges(self) -> List[Edge]:
        """Edges between two zero-radius feature spheres."""
        return [e for e in self.edges if all(self.spheres[v].kind.is_feature for v in e)]

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "vertices": [self.spheres[v].to_dict() for v in self.vertices],
            "edges": [list(e) for e in self.edges],
            "faces": [list(f) for f in self.faces],
            "tets_pruned": self.tets_pruned,
            "euler": self.euler,
        }


@dataclass
class TriangleMesh:
    """Indexed triangle surface."""
    vertices: np.ndarray
    faces: np.ndarray

    def __post_init__(self):
        """Coerce arrays and check indices."""
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValueError("Face index out of range")

    @property
    def n_faces(self) -> int:
        return int(len(self.faces))

    @property
    def bbox_diag(self) -> float:
        if not len(self.vertices):
            return 0.0
        return float(np.linalg.norm(self.vertices.max(axis=0) - self.vertices.min(axis=0)))

    @property
    def areas(self) -> np.ndarray:
        p = self.vertices[self.faces]
        return 0.5 * np.linalg.norm(np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1)

    def edge_counts(self) -> Dict[Edge, int]:
        counts: Dict[Edge, int] = {}
        for a, b, c in self.faces:
            for u, v in ((a, b), (b, c), (c, a)):
                key = (int(min(u, v)), int(max(u, v)))
                counts[key] = counts.get(key, 0) + 1
        return counts

    def is_watertight(self) -> bool:
        """Every edge is shared by exactly two triangles."""
        counts = self.edge_counts()
        return bool(counts) and all(n == 2 for n in counts.values())

    @property
    def euler(self) -> int:
        used = np.unique(self.faces)
        return len(used) - len(self.edge_counts()) + len(self.faces)


@dataclass
class MetricsReport:
    """Two-sided Hausdorff errors (percent of the input diagonal) and run summary.

    The errors are None when there was no reconstruction to measure.
    """
    eps1: Optional[float]
    eps2: Optional[float]
    euler: int
    n_spheres: int
    eps_max: Optional[float] = None
    timings: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        """Derive and validate eps_max."""
        if (self.eps1 is None) != (self.eps2 is None):
            raise ValueError("eps1 and eps2 must both be measured or both be None")
        if self.eps1 is None:
            if self.eps_max is not None:
                raise ValueError("eps_max needs measured eps1 and eps2")
            return
        if self.eps1 < 0 or self.eps2 < 0:
            raise ValueError("Hausdorff errors cannot be negative")
        if self.eps_max is None:
            self.eps_max = max(self.eps1, self.eps2)
        elif not np.isclose(self.eps_max, max(self.eps1, self.eps2)):
            raise ValueError("eps_max must equal max(eps1, eps2)")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "eps1": self.eps1,
            "eps2": self.eps2,
            "eps_max": self.eps_max,
            "euler": self.euler,
            "n_spheres": self.n_spheres,
            "timings": dict(self.timings),
        }
