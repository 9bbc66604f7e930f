"""Nearest-surface-point and point-location queries."""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial import cKDTree


logger = logging.getLogger(__name__)


def closest_points_on_triangles(p: np.ndarray, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Closest point to ``p`` on each triangle (a, b, c), vectorized.

    ``p`` broadcasts against the (n, 3) corner arrays. Regions are resolved
    in Voronoi-region order: vertex, edge, then face interior.
    """
    p = np.asarray(p, dtype=float)
    ab = b - a
    ac = c - a
    ap = p - a
    d1 = np.einsum("...i,...i->...", ab, ap)
    d2 = np.einsum("...i,...i->...", ac, ap)
    bp = p - b
    d3 = np.einsum("...i,...i->...", ab, bp)
    d4 = np.einsum("...i,...i->...", ac, bp)
    cp = p - c
    d5 = np.einsum("...i,...i->...", ab, cp)
    d6 = np.einsum("...i,...i->...", ac, cp)

    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4

    with np.errstate(divide="ignore", invalid="ignore"):
        denom = va + vb + vc
        denom = np.where(np.abs(denom) > 0, denom, 1.0)
        v = vb / denom
        w = vc / denom
        result = a + ab * v[..., None] + ac * w[..., None]

        bc_den = (d4 - d3) + (d5 - d6)
        t_bc = np.where(np.abs(bc_den) > 0, (d4 - d3) / np.where(bc_den == 0, 1.0, bc_den), 0.0)
        on_bc = (va <= 0) & ((d4 - d3) >= 0) & ((d5 - d6) >= 0)
        result = np.where(on_bc[..., None], b + (c - b) * t_bc[..., None], result)

        ac_den = d2 - d6
        t_ac = np.where(ac_den != 0, d2 / np.where(ac_den == 0, 1.0, ac_den), 0.0)
        on_ac = (vb <= 0) & (d2 >= 0) & (d6 <= 0)
        result = np.where(on_ac[..., None], a + ac * t_ac[..., None], result)

        on_c = (d6 >= 0) & (d5 <= d6)
        result = np.where(on_c[..., None], np.broadcast_to(c, result.shape), result)

        ab_den = d1 - d3
        t_ab = np.where(ab_den != 0, d1 / np.where(ab_den == 0, 1.0, ab_den), 0.0)
        on_ab = (vc <= 0) & (d1 >= 0) & (d3 <= 0)
        result = np.where(on_ab[..., None], a + ab * t_ab[..., None], result)

        on_b = (d3 >= 0) & (d4 <= d3)
        result = np.where(on_b[..., None], np.broadcast_to(b, result.shape), result)

        on_a = (d1 <= 0) & (d2 <= 0)
        result = np.where(on_a[..., None], np.broadcast_to(a, result.shape), result)
    return result


def closest_points_on_segments(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Closest point to ``p`` on each segment (a, b)."""
    d = b - a
    length_sq = np.einsum("...i,...i->...", d, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.einsum("...i,...i->...", np.asarray(p, dtype=float) - a, d) / np.where(length_sq > 0, length_sq, 1.0)
    t = np.clip(t, 0.0, 1.0)
    return a + d * t[..., None]


@dataclass
class NearestHit:
    """Result of a nearest-surface-point query."""
    point: np.ndarray
    distance: float
    triangle: int
    normal: np.ndarray


class SurfaceIndex:
    """Nearest point queries over a triangle soup.

    A cKDTree over triangle centroids gives an upper bound, then every
    triangle whose bounding ball can beat it is refined exactly.
    """

    def __init__(self, vertices: np.ndarray, faces: np.ndarray, normals: np.ndarray = None):
        self.vertices = np.asarray(vertices, dtype=float)
        self.faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
        if len(self.faces) == 0:
            raise ValueError("SurfaceIndex needs at least one triangle")
        self._a = self.vertices[self.faces[:, 0]]
        self._b = self.vertices[self.faces[:, 1]]
        self._c = self.vertices[self.faces[:, 2]]
        if normals is None:
            n = np.cross(self._b - self._a, self._c - self._a)
            lengths = np.linalg.norm(n, axis=1)
            normals = n / np.where(lengths > 0, lengths, 1.0)[:, None]
        self.normals = np.asarray(normals, dtype=float)
        self.centroids = (self._a + self._b + self._c) / 3.0
        radii = np.stack([
            np.linalg.norm(self._a - self.centroids, axis=1),
            np.linalg.norm(self._b - self.centroids, axis=1),
            np.linalg.norm(self._c - self.centroids, axis=1),
        ]).max(axis=0)
        self.max_radius = float(radii.max())
        self._tree = cKDTree(self.centroids)
        used = self.vertices[np.unique(self.faces)]
        self.bbox_diag = float(np.linalg.norm(used.max(axis=0) - used.min(axis=0)))

    def nearest(self, point: np.ndarray) -> NearestHit:
        """Closest surface point to ``point``."""
        point = np.asarray(point, dtype=float)
        _, first = self._tree.query(point)
        q0 = closest_points_on_triangles(point, self._a[first], self._b[first], self._c[first])
        bound = float(np.linalg.norm(point - q0))
        candidates = np.asarray(self._tree.query_ball_point(point, bound + self.max_radius + 1e-12), dtype=np.int64)
        if candidates.size == 0:
            candidates = np.array([first], dtype=np.int64)
        q = closest_points_on_triangles(point, self._a[candidates], self._b[candidates], self._c[candidates])
        dist = np.linalg.norm(q - point, axis=1)
        best = int(np.argmin(dist))
        tri = int(candidates[best])
        return NearestHit(point=q[best], distance=float(dist[best]), triangle=tri, normal=self.normals[tri].copy())

    def nearest_many(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Closest points, distances and triangle ids for a batch of points."""
        points = np.asarray(points, dtype=float).reshape(-1, 3)
        closest = np.empty_like(points)
        distances = np.empty(len(points))
        triangles = np.empty(len(points), dtype=np.int64)
        for k, point in enumerate(points):
            hit = self.nearest(point)
            closest[k] = hit.point
            distances[k] = hit.distance
            triangles[k] = hit.triangle
        return closest, distances, triangles


class TetLocator:
    """Point location in a tet mesh by barycentric tests on nearby tets."""

    def __init__(self, vertices: np.ndarray, tets: np.ndarray):
        self.vertices = np.asarray(vertices, dtype=float)
        self.tets = np.asarray(tets, dtype=np.int64)
        p = self.vertices[self.tets]
        self._origin = p[:, 0]
        frame = np.stack([p[:, 1] - p[:, 0], p[:, 2] - p[:, 0], p[:, 3] - p[:, 0]], axis=2)
        self._inverse = np.linalg.inv(frame)
        centroids = p.mean(axis=1)
        self._radius = float(np.linalg.norm(p - centroids[:, None, :], axis=2).max())
        self._tree = cKDTree(centroids)

    def barycentric(self, tet: int, point: np.ndarray) -> np.ndarray:
        lam = self._inverse[tet] @ (np.asarray(point, dtype=float) - self._origin[tet])
        return np.concatenate([[1.0 - lam.sum()], lam])

    def locate(self, point: np.ndarray, tol: float = 1e-9) -> int:
        """Index of a tet containing ``point`` or -1."""
        point = np.asarray(point, dtype=float)
        candidates = np.asarray(self._tree.query_ball_point(point, self._radius * (1.0 + 1e-9)), dtype=np.int64)
        if candidates.size == 0:
            return -1
        lam = np.einsum("kij,kj->ki", self._inverse[candidates], point - self._origin[candidates])
        bary = np.concatenate([1.0 - lam.sum(axis=1, keepdims=True), lam], axis=1)
        inside = np.all(bary >= -tol, axis=1)
        hits = candidates[inside]
        return int(hits.min()) if hits.size else -1
