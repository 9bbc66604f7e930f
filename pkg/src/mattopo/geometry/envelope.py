"""Distances to the enveloping volumes of medial primitives.

A medial edge sweeps a sphere linearly between its two end spheres (a
medial cone); a medial triangle sweeps over barycentric combinations of
three spheres (a medial slab). The signed distance to a swept volume is
min over the parameters of |p - c| - r, a convex function, so the minimum
is either an interior stationary point or lies on the boundary.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from ..models.medial_mesh import MedialMesh
from ..models.sphere import MedialSphere


class PrimitiveKind(Enum):
    """Enveloping volume type by number of spheres."""
    SPHERE = "sphere"
    CONE = "cone"
    SLAB = "slab"


@dataclass
class EnvelopePrimitive:
    """Sphere, medial cone or medial slab over distinct sphere ids."""
    kind: PrimitiveKind
    ids: Tuple[int, ...]
    centers: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        """Check the sphere count against the kind."""
        self.centers = np.asarray(self.centers, dtype=float).reshape(-1, 3)
        self.radii = np.asarray(self.radii, dtype=float).reshape(-1)
        expected = {PrimitiveKind.SPHERE: 1, PrimitiveKind.CONE: 2, PrimitiveKind.SLAB: 3}[self.kind]
        if len(self.ids) != expected or len(self.centers) != expected or len(self.radii) != expected:
            raise ValueError(f"{self.kind.value} needs exactly {expected} spheres")
        if len(set(self.ids)) != expected:
            raise ValueError(f"{self.kind.value} spheres must be distinct")

    @classmethod
    def from_spheres(cls, spheres: Sequence[MedialSphere]) -> "EnvelopePrimitive":
        kind = (PrimitiveKind.SPHERE, PrimitiveKind.CONE, PrimitiveKind.SLAB)[len(spheres) - 1]
        return cls(
            kind=kind,
            ids=tuple(s.id for s in spheres),
            centers=np.array([s.center for s in spheres]),
            radii=np.array([s.radius for s in spheres]),
        )

    def bounding_ball(self) -> Tuple[np.ndarray, float]:
        """Ball containing the whole enveloping volume."""
        center = self.centers.mean(axis=0)
        reach = np.linalg.norm(self.centers - center, axis=1) + self.radii
        return center, float(reach.max())

    def signed(self, points: np.ndarray) -> np.ndarray:
        return signed_distance(points, self)


def sphere_signed(points: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    return np.linalg.norm(np.asarray(points, dtype=float).reshape(-1, 3) - center, axis=1) - radius


def cone_signed(points: np.ndarray, c1: np.ndarray, r1: float, c2: np.ndarray, r2: float) -> np.ndarray:
    """Signed distance to the round cone swept between two spheres."""
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    axis = c2 - c1
    length = float(np.linalg.norm(axis))
    ends = np.minimum(sphere_signed(points, c1, r1), sphere_signed(points, c2, r2))
    if length <= abs(r2 - r1) or length == 0.0:
        # one sphere contains the other
        return ends
    u = axis / length
    k = (r2 - r1) / length
    root = math.sqrt(1.0 - k * k)
    q = points - c1
    x = q @ u
    y = np.linalg.norm(q - x[:, None] * u, axis=1)
    s = x + k * y / root
    side = y * root - k * x - r1
    return np.where((s >= 0.0) & (s <= length), side, ends)


def _cones_of(prim: EnvelopePrimitive, points: np.ndarray) -> np.ndarray:
    c, r = prim.centers, prim.radii
    return np.minimum.reduce([
        cone_signed(points, c[0], r[0], c[1], r[1]),
        cone_signed(points, c[1], r[1], c[2], r[2]),
        cone_signed(points, c[0], r[0], c[2], r[2]),
    ])


def slab_signed(points: np.ndarray, prim: EnvelopePrimitive) -> np.ndarray:
    """Signed distance to the slab swept over a triangle of spheres."""
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    best = _cones_of(prim, points)
    c, r = prim.centers, prim.radii
    e = np.stack([c[1] - c[0], c[2] - c[0]])
    dr = np.array([r[1] - r[0], r[2] - r[0]])
    gram = e @ e.T
    det = float(np.linalg.det(gram))
    if det <= 1e-14 * float(np.trace(gram)) ** 2:
        return best
    inv = np.linalg.inv(gram)
    normal = np.cross(e[0], e[1])
    normal /= np.linalg.norm(normal)

    # unit direction w from the nearest swept center to p: w.e_i = -dr_i
    ab = inv @ (-dr)
    in_plane = ab @ e
    planar_sq = float(in_plane @ in_plane)
    q = points - c[0]
    height = q @ normal

    if planar_sq < 1.0:
        gamma = math.sqrt(1.0 - planar_sq)
        lifted = np.abs(height) > 0.0
        sign = np.where(height >= 0.0, 1.0, -1.0)
        t = np.where(lifted, np.abs(height) / gamma, 0.0)
        w = in_plane[None, :] + (sign * gamma)[:, None] * normal[None, :]
        foot = q - t[:, None] * w
        bary = foot @ e.T @ inv
        feasible = lifted & (bary[:, 0] >= 0) & (bary[:, 1] >= 0) & (bary.sum(axis=1) <= 1.0)
        radius = r[0] + bary @ dr
        best = np.where(feasible, np.minimum(best, t - radius), best)

    # points in the plane of the centers, inside the triangle
    planar = np.abs(height) <= 1e-12 * max(1.0, float(np.abs(e).max()))
    if planar.any():
        bary = (q @ e.T) @ inv
        inside = planar & (bary[:, 0] >= 0) & (bary[:, 1] >= 0) & (bary.sum(axis=1) <= 1.0)
        radius = r[0] + bary @ dr
        best = np.where(inside, np.minimum(best, -radius), best)
    return best


def signed_distance(points: np.ndarray, prim: EnvelopePrimitive) -> np.ndarray:
    """Signed distance from each point to the primitive's envelope, negative inside."""
    if prim.kind is PrimitiveKind.SPHERE:
        return sphere_signed(points, prim.centers[0], prim.radii[0])
    if prim.kind is PrimitiveKind.CONE:
        return cone_signed(points, prim.centers[0], prim.radii[0], prim.centers[1], prim.radii[1])
    return slab_signed(points, prim)


def envelope_distance(point: np.ndarray, prim: EnvelopePrimitive) -> float:
    """Unsigned distance from ``point`` to the envelope; zero inside."""
    return float(max(0.0, signed_distance(point, prim)[0]))


def _ternary(f, lo: float, hi: float, tol: float) -> float:
    while hi - lo > tol:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if f(m1) <= f(m2):
            hi = m2
        else:
            lo = m1
    return f(0.5 * (lo + hi))


def envelope_distance_numeric(point: np.ndarray, prim: EnvelopePrimitive, tol: float = 1e-10) -> float:
    """Same as ``envelope_distance`` by ternary search over the sweep parameters."""
    p = np.asarray(point, dtype=float).reshape(3)
    c, r = prim.centers, prim.radii

    def at(weights: np.ndarray) -> float:
        return float(np.linalg.norm(p - weights @ c) - weights @ r)

    if prim.kind is PrimitiveKind.SPHERE:
        value = at(np.array([1.0]))
    elif prim.kind is PrimitiveKind.CONE:
        value = _ternary(lambda t: at(np.array([1.0 - t, t])), 0.0, 1.0, tol)
    else:
        def inner(a: float) -> float:
            return _ternary(lambda b: at(np.array([1.0 - a - b, a, b])), 0.0, 1.0 - a, tol)

        value = _ternary(inner, 0.0, 1.0, tol)
    return max(0.0, value)


def envelope_primitives(medial: MedialMesh) -> List[EnvelopePrimitive]:
    """Every vertex, edge and face of a medial mesh as an envelope primitive."""
    spheres = medial.spheres
    prims = [EnvelopePrimitive.from_spheres([spheres[v]]) for v in medial.vertices]
    prims += [EnvelopePrimitive.from_spheres([spheres[a], spheres[b]]) for a, b in medial.edges]
    prims += [EnvelopePrimitive.from_spheres([spheres[a], spheres[b], spheres[c]]) for a, b, c in medial.faces]
    return prims
