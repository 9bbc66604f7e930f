"""Sharp edge and corner detection on the boundary surface."""

import logging
import math
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import MeshLoadError
from ..models.features import FeaturePolyline, FeatureSegment
from ..models.tet_mesh import FeatureEdge, FeatureKind, TetMesh


logger = logging.getLogger(__name__)


def _classify_edge(mesh: TetMesh, key: Tuple[int, int], tris: Sequence[int]) -> Tuple[float, FeatureKind]:
    """Dihedral deviation from a flat surface and its convexity."""
    t1, t2 = tris
    n1 = mesh.surface_normals[t1]
    n2 = mesh.surface_normals[t2]
    deviation = math.acos(float(np.clip(np.dot(n1, n2), -1.0, 1.0)))
    opposite = [v for v in mesh.surface_faces[t2] if v not in key][0]
    side = float(np.dot(mesh.vertices[opposite] - mesh.vertices[key[0]], n1))
    kind = FeatureKind.CONVEX if side < 0 else FeatureKind.CONCAVE
    return deviation, kind


def _find_corners(mesh: TetMesh, edges: List[FeatureEdge], threshold_rad: float) -> List[int]:
    incident: Dict[int, List[int]] = {}
    for edge in edges:
        incident.setdefault(edge.v0, []).append(edge.v1)
        incident.setdefault(edge.v1, []).append(edge.v0)
    corners = []
    for v, others in incident.items():
        if len(others) >= 3 or len(others) == 1:
            corners.append(v)
        elif len(others) == 2:
            d1 = mesh.vertices[v] - mesh.vertices[others[0]]
            d2 = mesh.vertices[others[1]] - mesh.vertices[v]
            cos_turn = np.dot(d1, d2) / (np.linalg.norm(d1) * np.linalg.norm(d2))
            if math.acos(float(np.clip(cos_turn, -1.0, 1.0))) > threshold_rad:
                corners.append(v)
    return sorted(corners)


def detect_features(mesh: TetMesh, angle_threshold_deg: float = 30.0) -> TetMesh:
    """Flag surface edges whose dihedral angle deviates from flat by more than the threshold."""
    if not 0.0 < angle_threshold_deg < 180.0:
        raise ValueError("Angle threshold must be in (0, 180) degrees")
    threshold = math.radians(angle_threshold_deg)

    edges: List[FeatureEdge] = []
    for key in sorted(mesh.surface_edge_triangles):
        tris = mesh.surface_edge_triangles[key]
        deviation, kind = _classify_edge(mesh, key, tris)
        if deviation > threshold:
            edges.append(FeatureEdge(v0=key[0], v1=key[1], kind=kind, triangles=(tris[0], tris[1])))

    corners = _find_corners(mesh, edges, threshold)
    n_concave = sum(1 for e in edges if e.kind is FeatureKind.CONCAVE)
    logger.info(f"Detected {len(edges)} feature edges ({n_concave} concave) and {len(corners)} corners")
    return replace(mesh, feature_edges=edges, corners=corners)


def apply_feature_annotations(
    mesh: TetMesh,
    edge_keys: List[Tuple[int, int]],
    corners: List[int],
    angle_threshold_deg: float = 30.0,
) -> TetMesh:
    """Use externally supplied sharp edges and corners instead of detection."""
    edges: List[FeatureEdge] = []
    for key in sorted(edge_keys):
        tris = mesh.surface_edge_triangles.get(key)
        if tris is None:
            raise MeshLoadError(f"Feature edge {key} is not a surface edge")
        _, kind = _classify_edge(mesh, key, tris)
        edges.append(FeatureEdge(v0=key[0], v1=key[1], kind=kind, triangles=(tris[0], tris[1])))
    surface = set(int(v) for v in mesh.surface_vertices)
    for v in corners:
        if v not in surface:
            raise MeshLoadError(f"Corner {v} is not a surface vertex")
    derived = _find_corners(mesh, edges, math.radians(angle_threshold_deg))
    all_corners = sorted(set(corners) | set(derived))
    logger.info(f"Loaded {len(edges)} feature edges and {len(all_corners)} corners from annotations")
    return replace(mesh, feature_edges=edges, corners=all_corners)


def convex_corners(mesh: TetMesh) -> List[int]:
    """Corners touching at least one convex feature edge."""
    touching = set()
    for edge in mesh.feature_edges:
        if edge.kind is FeatureKind.CONVEX:
            touching.update((edge.v0, edge.v1))
    return [v for v in mesh.corners if v in touching]


def feature_polylines(mesh: TetMesh) -> List[FeaturePolyline]:
    """Chain feature edges into polylines split at corners and at convexity changes."""
    incident: Dict[int, List[int]] = {}
    for k, edge in enumerate(mesh.feature_edges):
        incident.setdefault(edge.v0, []).append(k)
        incident.setdefault(edge.v1, []).append(k)

    corner_set = set(mesh.corners)

    def is_break(v: int) -> bool:
        around = incident.get(v, [])
        if v in corner_set or len(around) != 2:
            return True
        return mesh.feature_edges[around[0]].kind is not mesh.feature_edges[around[1]].kind

    visited = [False] * len(mesh.feature_edges)
    polylines: List[FeaturePolyline] = []

    def walk(start_vertex: int, first_edge: int) -> FeaturePolyline:
        chain_vertices = [start_vertex]
        chain_edges: List[int] = []
        kind = mesh.feature_edges[first_edge].kind
        v, e = start_vertex, first_edge
        while True:
            visited[e] = True
            chain_edges.append(e)
            edge = mesh.feature_edges[e]
            v = edge.v1 if edge.v0 == v else edge.v0
            chain_vertices.append(v)
            if is_break(v) or v == start_vertex:
                break
            nxt = [k for k in incident[v] if not visited[k]]
            if not nxt:
                break
            e = nxt[0]
        closed = chain_vertices[0] == chain_vertices[-1]
        return FeaturePolyline(vertices=chain_vertices, edges=chain_edges, kind=kind, closed=closed)

    for v in sorted(incident):
        if not is_break(v):
            continue
        for e in sorted(incident[v]):
            if not visited[e]:
                polylines.append(walk(v, e))
    for e in range(len(mesh.feature_edges)):
        if not visited[e]:
            start = min(mesh.feature_edges[e].v0, mesh.feature_edges[e].v1)
            polylines.append(walk(start, e))
    return polylines


def segment_polylines(
    mesh: TetMesh,
    polylines: List[FeaturePolyline],
    segment_length: float,
    kinds: Optional[Tuple[FeatureKind, ...]] = None,
) -> List[FeatureSegment]:
    """Split polylines into pieces of at most ``segment_length`` arc length."""
    if segment_length <= 0:
        raise ValueError("segment_length must be positive")
    segments: List[FeatureSegment] = []
    for p, polyline in enumerate(polylines):
        if kinds is not None and polyline.kind not in kinds:
            continue
        points = mesh.vertices[polyline.vertices]
        lengths = np.linalg.norm(np.diff(points, axis=0), axis=1)
        cumulative = np.concatenate([[0.0], np.cumsum(lengths)])
        total = float(cumulative[-1])
        if total <= 0:
            continue
        n = max(1, int(math.ceil(total / segment_length)))

        def point_at(s: float) -> Tuple[np.ndarray, int]:
            k = int(np.clip(np.searchsorted(cumulative, s, side="right") - 1, 0, len(lengths) - 1))
            t = (s - cumulative[k]) / lengths[k] if lengths[k] > 0 else 0.0
            return points[k] + t * (points[k + 1] - points[k]), polyline.edges[k]

        for i in range(n):
            start, _ = point_at(total * i / n)
            end, _ = point_at(total * (i + 1) / n)
            mid, edge = point_at(total * (i + 0.5) / n)
            segments.append(FeatureSegment(
                polyline=p, index=i, start=start, end=end, midpoint=mid, kind=polyline.kind, edge=edge,
            ))
    return segments
