"""Half-spaces bounding restricted power cells."""

from dataclasses import dataclass
from enum import Enum
from typing import List

import numpy as np

from ..models.sphere import MedialSphere
from ..models.tet_mesh import LOCAL_FACES, TetMesh


class PlaneKind(Enum):
    """What a half-space comes from."""
    RADICAL = "radical"
    TET_FACE = "tet_face"


@dataclass(frozen=True)
class HalfSpace:
    """Points with a*x + b*y + c*z + d > 0, normalized so |(a, b, c)| = 1.

    ``ref`` is the neighbor sphere id for radical planes and the global face
    id for tet faces.
    """
    a: float
    b: float
    c: float
    d: float
    kind: PlaneKind
    ref: int

    def __post_init__(self):
        """Validate the plane normal."""
        norm = float(np.sqrt(self.a * self.a + self.b * self.b + self.c * self.c))
        if norm < 1e-300:
            raise ValueError("Half-space normal cannot be zero")
        if abs(norm - 1.0) > 1e-9:
            raise ValueError("Half-space normal must be unit length")

    @classmethod
    def from_normal(cls, normal: np.ndarray, offset: float, kind: PlaneKind, ref: int) -> "HalfSpace":
        """Normalize (normal, offset) and build the half-space."""
        normal = np.asarray(normal, dtype=float)
        norm = float(np.linalg.norm(normal))
        if norm < 1e-300:
            raise ValueError("Half-space normal cannot be zero")
        n = normal / norm
        return cls(float(n[0]), float(n[1]), float(n[2]), float(offset) / norm, kind, int(ref))

    @property
    def normal(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c])

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    @property
    def is_radical(self) -> bool:
        return self.kind is PlaneKind.RADICAL

    def signed_distance(self, points: np.ndarray) -> np.ndarray:
        """Positive inside, for one point or an (N, 3) array."""
        points = np.asarray(points, dtype=float)
        return points @ self.normal + self.d

    def shifted(self, delta: float) -> "HalfSpace":
        """Same plane moved by ``delta`` along its normal direction of growth."""
        return HalfSpace(self.a, self.b, self.c, self.d + delta, self.kind, self.ref)


def radical_plane(mi: MedialSphere, mj: MedialSphere) -> HalfSpace:
    """Half-space of points power-closer to ``mi`` than to ``mj``.

    The signed distance equals the power difference divided by twice the
    center distance.
    """
    u = mj.center - mi.center
    length = float(np.linalg.norm(u))
    if length <= 1e-300:
        raise ValueError(f"Spheres {mi.id} and {mj.id} have coincident centers")
    mid = 0.5 * (mi.center + mj.center)
    normal = -u / length
    offset = float(u @ mid) / length + (mi.weight - mj.weight) / (2.0 * length)
    return HalfSpace(float(normal[0]), float(normal[1]), float(normal[2]), offset, PlaneKind.RADICAL, mj.id)


def tet_face_halfspaces(mesh: TetMesh, tet: int) -> List[HalfSpace]:
    """The 4 inward half-spaces of a tet, local face k opposite vertex k."""
    points = mesh.tet_points(tet)
    planes = []
    for k, (i, j, l) in enumerate(LOCAL_FACES):
        outward = np.cross(points[j] - points[i], points[l] - points[i])
        inward = -outward / np.linalg.norm(outward)
        planes.append(HalfSpace.from_normal(inward, -float(inward @ points[i]), PlaneKind.TET_FACE,
                                            int(mesh.tet_faces[tet, k])))
    return planes
