"""Convex cells stored as plane triplets, clipped by half-spaces.

A cell is the intersection of its half-spaces. Each cell vertex is the
triplet of planes meeting there; the triplets form a consistently oriented
triangulation over plane indices (the dual of the cell boundary). Clipping
removes the triplets outside the new plane and fans the hole boundary to it.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..errors import ClipDegeneracyError
from ..models.tet_mesh import LOCAL_EDGES, LOCAL_FACES, TetMesh
from ..models.topology import Dimension, FractionalEuler
from .halfspace import HalfSpace, tet_face_halfspaces


logger = logging.getLogger(__name__)

Pair = Tuple[int, int]

_LOCAL_EDGE_INDEX = {pair: k for k, pair in enumerate(LOCAL_EDGES)}


class NonSimpleBoundary(Exception):
    """The region cut away by a plane is not a disk in the triplet structure."""


def _pair(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


@dataclass(eq=False)
class ConvexCell:
    """Piece of one tet owned by one sphere."""
    owner: int
    tet: int
    planes: List[HalfSpace]
    triplets: np.ndarray
    points: np.ndarray
    vertex_payload: List[FractionalEuler] = field(default_factory=list)
    edge_payload: Dict[Pair, FractionalEuler] = field(default_factory=dict)
    facet_payload: Dict[int, FractionalEuler] = field(default_factory=dict)
    cell_payload: FractionalEuler = field(default_factory=lambda: FractionalEuler(Fraction(1), Dimension.CELL))
    perturbations: int = 0

    @classmethod
    def from_tet(cls, mesh: TetMesh, tet: int, owner: int, payloads) -> "ConvexCell":
        """Whole tet as a cell, carrying the mesh element payloads."""
        corners = mesh.tets[tet]
        vertex_payload = [FractionalEuler(payloads.vertex[v], Dimension.VERTEX) for v in corners]
        edge_payload = {}
        for a in range(4):
            for b in range(a + 1, 4):
                local = tuple(k for k in range(4) if k not in (a, b))
                edge_id = mesh.tet_edges[tet, _LOCAL_EDGE_INDEX[local]]
                edge_payload[(a, b)] = FractionalEuler(payloads.edge[edge_id], Dimension.EDGE)
        facet_payload = {
            k: FractionalEuler(payloads.face[mesh.tet_faces[tet, k]], Dimension.FACE) for k in range(4)
        }
        return cls(
            owner=owner,
            tet=tet,
            planes=tet_face_halfspaces(mesh, tet),
            triplets=np.array(LOCAL_FACES, dtype=np.int64),
            points=mesh.tet_points(tet).copy(),
            vertex_payload=vertex_payload,
            edge_payload=edge_payload,
            facet_payload=facet_payload,
        )

    @property
    def empty(self) -> bool:
        return len(self.triplets) == 0

    @property
    def n_vertices(self) -> int:
        return len(self.triplets)

    def facets(self) -> List[int]:
        """Plane indices carrying a facet."""
        return sorted(self.facet_payload)

    def edges(self) -> Dict[Pair, Tuple[int, int]]:
        """Plane pair of every edge -> its two endpoint vertex indices."""
        ends: Dict[Pair, List[int]] = {}
        for v, (a, b, c) in enumerate(self.triplets):
            for p, q in ((a, b), (b, c), (c, a)):
                ends.setdefault(_pair(int(p), int(q)), []).append(v)
        return {key: (vs[0], vs[1]) for key, vs in ends.items() if len(vs) == 2}

    def radical_index(self) -> Dict[int, int]:
        """Neighbor sphere id -> plane index, for radical planes with a facet."""
        return {self.planes[h].ref: h for h in self.facet_payload if self.planes[h].is_radical}

    def facet_polygon(self, plane: int) -> List[int]:
        """Vertex indices around the facet on ``plane``, counter-clockwise seen from outside."""
        link: Dict[int, Tuple[int, int]] = {}
        for v, tri in enumerate(self.triplets):
            tri = [int(x) for x in tri]
            if plane not in tri:
                continue
            k = tri.index(plane)
            x, y = tri[(k + 1) % 3], tri[(k + 2) % 3]
            link[x] = (y, v)
        if not link:
            return []
        start = next(iter(link))
        order: List[int] = []
        current = start
        for _ in range(len(link)):
            nxt, v = link[current]
            order.append(v)
            current = nxt
            if current == start:
                break
        if len(order) >= 3:
            pts = self.points[order]
            normal = np.cross(pts[1:-1] - pts[0], pts[2:] - pts[0]).sum(axis=0)
            if normal @ self.planes[plane].normal > 0:
                order.reverse()
        return order

    def facet_area(self, plane: int) -> float:
        order = self.facet_polygon(plane)
        if len(order) < 3:
            return 0.0
        pts = self.points[order]
        return 0.5 * float(np.linalg.norm(np.cross(pts[1:-1] - pts[0], pts[2:] - pts[0]).sum(axis=0)))

    def facet_centroid(self, plane: int) -> np.ndarray:
        """Area-weighted centroid of a facet polygon."""
        order = self.facet_polygon(plane)
        pts = self.points[order]
        if len(order) < 3:
            return pts.mean(axis=0)
        tri_areas = 0.5 * np.linalg.norm(np.cross(pts[1:-1] - pts[0], pts[2:] - pts[0]), axis=1)
        tri_centroids = (pts[0] + pts[1:-1] + pts[2:]) / 3.0
        total = tri_areas.sum()
        if total <= 0:
            return pts.mean(axis=0)
        return (tri_areas[:, None] * tri_centroids).sum(axis=0) / total

    def volume(self) -> float:
        if self.empty:
            return 0.0
        center = self.points.mean(axis=0)
        total = 0.0
        for plane in self.facet_payload:
            order = self.facet_polygon(plane)
            if len(order) < 3:
                continue
            pts = self.points[order] - center
            total += abs(float((np.cross(pts[1:-1], pts[2:]) @ pts[0]).sum()))
        return total / 6.0

    def centroid(self) -> np.ndarray:
        return self.points.mean(axis=0)

    def contains(self, point: np.ndarray, eps: float = 0.0) -> bool:
        if self.empty:
            return False
        return all(plane.signed_distance(point) >= -eps for plane in self.planes)

    def max_violation(self) -> float:
        """Largest distance by which a vertex lies outside one of the planes."""
        if self.empty:
            return 0.0
        coeffs = np.array([p.coefficients for p in self.planes])
        s = self.points @ coeffs[:, :3].T + coeffs[:, 3]
        return float(max(0.0, -s.min()))

    def euler_payloads(self) -> Fraction:
        """Signed payload sum over the closed cell (vertices, edges, facets, interior)."""
        total = sum((p.signed for p in self.vertex_payload), Fraction(0))
        total += sum((p.signed for p in self.edge_payload.values()), Fraction(0))
        total += sum((p.signed for p in self.facet_payload.values()), Fraction(0))
        return total + self.cell_payload.signed

    def clip(self, plane: HalfSpace, eps: float) -> "ConvexCell":
        """Intersection with ``plane``; returns ``self`` when nothing is cut off."""
        if self.empty:
            return self
        s = plane.signed_distance(self.points)
        removed = s < -eps
        if not removed.any():
            return self
        if removed.all():
            return self._emptied()

        owner_of: Dict[Pair, int] = {}
        for v, (a, b, c) in enumerate(self.triplets):
            owner_of[(int(a), int(b))] = v
            owner_of[(int(b), int(c))] = v
            owner_of[(int(c), int(a))] = v

        boundary: Dict[int, Tuple[int, int, int]] = {}
        for v in np.flatnonzero(removed):
            a, b, c = (int(x) for x in self.triplets[v])
            for p, q in ((a, b), (b, c), (c, a)):
                kept = owner_of.get((q, p))
                if kept is None:
                    raise NonSimpleBoundary(f"Open triplet structure at edge ({p}, {q})")
                if removed[kept]:
                    continue
                if p in boundary:
                    raise NonSimpleBoundary(f"Plane {p} visited twice by the cut")
                boundary[p] = (q, int(v), kept)

        start = next(iter(boundary))
        current, steps = start, 0
        while True:
            current = boundary[current][0]
            steps += 1
            if current == start or current not in boundary or steps > len(boundary):
                break
        if current != start or steps != len(boundary):
            raise NonSimpleBoundary("Cut boundary is not a single cycle")

        new_index = len(self.planes)
        keep_idx = np.flatnonzero(~removed)
        triplets = [tuple(int(x) for x in self.triplets[k]) for k in keep_idx]
        points = [self.points[k] for k in keep_idx]
        vertex_payload = [self.vertex_payload[k] for k in keep_idx]

        edge_payload = dict(self.edge_payload)
        facet_payload = dict(self.facet_payload)
        for p, (q, out_v, in_v) in boundary.items():
            s_in, s_out = float(s[in_v]), float(s[out_v])
            t = s_in / (s_in - s_out) if s_in != s_out else 0.0
            t = min(max(t, 0.0), 1.0)
            points.append(self.points[in_v] + t * (self.points[out_v] - self.points[in_v]))
            triplets.append((p, q, new_index))
            inherited = self.edge_payload[_pair(p, q)]
            vertex_payload.append(FractionalEuler(inherited.value, Dimension.VERTEX))
            edge_payload[_pair(p, new_index)] = FractionalEuler(self.facet_payload[p].value, Dimension.EDGE)
        facet_payload[new_index] = FractionalEuler(self.cell_payload.value, Dimension.FACE)

        tri_array = np.array(triplets, dtype=np.int64)
        live_pairs = set()
        for a, b, c in triplets:
            live_pairs.update((_pair(a, b), _pair(b, c), _pair(c, a)))
        live_planes = set(int(x) for x in tri_array.ravel())
        return ConvexCell(
            owner=self.owner,
            tet=self.tet,
            planes=self.planes + [plane],
            triplets=tri_array,
            points=np.array(points),
            vertex_payload=vertex_payload,
            edge_payload={k: v for k, v in edge_payload.items() if k in live_pairs},
            facet_payload={k: v for k, v in facet_payload.items() if k in live_planes},
            cell_payload=self.cell_payload,
            perturbations=self.perturbations,
        )

    def _emptied(self) -> "ConvexCell":
        return ConvexCell(
            owner=self.owner, tet=self.tet, planes=list(self.planes),
            triplets=np.zeros((0, 3), dtype=np.int64), points=np.zeros((0, 3)),
            cell_payload=self.cell_payload, perturbations=self.perturbations,
        )


def inherit_payloads(cell: ConvexCell, plane: HalfSpace, eps: float = 0.0) -> ConvexCell:
    """Cut ``cell`` by ``plane``.

    A new vertex takes the payload of the edge it splits, a new edge that of
    the facet it splits and the new facet that of the cell.
    """
    return cell.clip(plane, eps)


def clip_cell(
    mesh: TetMesh,
    tet: int,
    owner: int,
    planes: Sequence[HalfSpace],
    payloads,
    eps: float,
    max_perturbations: int = 3,
) -> ConvexCell:
    """Clip ``tet`` by every plane in order, starting from its four faces.

    A cut whose boundary is not a single cycle is retried with the plane
    shifted by growing multiples of ``eps``; after ``max_perturbations``
    failed retries ClipDegeneracyError is raised.
    """
    cell = ConvexCell.from_tet(mesh, tet, owner, payloads)
    for plane in planes:
        if cell.empty:
            break
        attempt = 0
        candidate = plane
        while True:
            try:
                clipped = inherit_payloads(cell, candidate, eps)
                break
            except NonSimpleBoundary as exc:
                attempt += 1
                if attempt > max_perturbations:
                    raise ClipDegeneracyError(
                        f"Clipping tet {tet} for sphere {owner} by plane of {plane.ref} failed: {exc}"
                    ) from exc
                shift = 10.0 * eps * attempt * (1 if attempt % 2 else -1)
                logger.debug(f"Perturbing plane {plane.ref} on tet {tet} by {shift:.3g}")
                candidate = plane.shifted(shift)
        if clipped is not cell and candidate is not plane:
            clipped.perturbations += attempt
        cell = clipped
    return cell
