"""Connected components of restricted cells, faces and edges."""

import logging
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..models.tet_mesh import TetMesh
from ..models.topology import Component, RestrictedElements, SurfaceFragment


logger = logging.getLogger(__name__)


class UnionFind:
    """Disjoint sets over 0..n-1 with path halving and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return True

    def groups(self) -> List[List[int]]:
        """Members of every set, ordered by smallest member."""
        by_root: Dict[int, List[int]] = {}
        for x in range(len(self.parent)):
            by_root.setdefault(self.find(x), []).append(x)
        return sorted(by_root.values(), key=lambda members: members[0])


def _across(mesh: TetMesh, tet: int, local: int) -> Tuple[int, int]:
    """(global face, tet on the other side or -1) of local face ``local``."""
    face = int(mesh.tet_faces[tet, local])
    a, b = mesh.face_tets[face]
    return face, int(b if a == tet else a)


def _components(
    nodes: List[int],
    linked: Callable[[int, int], bool],
    mesh: TetMesh,
    surface_of: Callable[[int], List[Tuple[np.ndarray, int]]],
    centroid_of: Callable[[int], np.ndarray],
) -> List[Component]:
    """Group tets by adjacency across shared faces."""
    index = {tet: k for k, tet in enumerate(nodes)}
    uf = UnionFind(len(nodes))
    for tet in nodes:
        for local in range(4):
            _, other = _across(mesh, tet, local)
            if other >= 0 and other in index and linked(tet, other):
                uf.union(index[tet], index[other])
    result = []
    for members in uf.groups():
        tets = [nodes[k] for k in members]
        points, triangles = [], []
        for tet in tets:
            for point, tri in surface_of(tet):
                points.append(point)
                triangles.append(tri)
        centroid = np.mean([centroid_of(tet) for tet in tets], axis=0)
        result.append(Component(
            tets=tets,
            surface_points=np.array(points).reshape(-1, 3),
            surface_triangles=np.array(triangles, dtype=np.int64),
            centroid=centroid,
        ))
    return result


def _plane_of(cell, neighbor: int) -> Optional[int]:
    """Plane index of the facet on the radical plane shared with ``neighbor``."""
    return cell.radical_index().get(neighbor)


def restricted_cc(
    mesh: TetMesh,
    sphere_center: np.ndarray,
    cells: Mapping[int, object],
    elements: RestrictedElements,
    eps: float,
) -> RestrictedElements:
    """Fill component counts, surface representatives and the surface patch of one sphere.

    ``cells`` maps tet index to the sphere's nonempty cell in that tet.
    Cells connect through a shared tet face whose facet has area above
    eps^2; restricted faces connect through a shared edge on a tet face,
    restricted edges through a shared vertex on a tet face.
    """
    area_eps = eps * eps
    cells = {t: c for t, c in cells.items() if not c.empty and c.volume() > area_eps * eps}
    tets = sorted(cells)

    # restricted cell
    face_facets: Dict[int, Dict[int, int]] = {}
    patch: List[SurfaceFragment] = []
    for tet in tets:
        cell = cells[tet]
        table = {}
        for h in cell.facet_payload:
            plane = cell.planes[h]
            if plane.is_radical or cell.facet_area(h) <= area_eps:
                continue
            table[plane.ref] = h
            if mesh.face_tets[plane.ref, 1] < 0:
                tri = mesh.surface_by_face[plane.ref]
                patch.append(SurfaceFragment(
                    tet=tet, face=plane.ref, triangle=tri, area=cell.facet_area(h),
                    centroid=cell.facet_centroid(h), normal=mesh.surface_normals[tri].copy(),
                ))
        face_facets[tet] = table

    def rpc_linked(a: int, b: int) -> bool:
        shared = set(face_facets[a]) & set(face_facets[b])
        return bool(shared)

    def rpc_surface(tet: int):
        return [(f.centroid, f.triangle) for f in patch if f.tet == tet]

    elements.surface_patch = patch
    elements.rpc_components = _components(tets, rpc_linked, mesh, rpc_surface, lambda t: cells[t].centroid())
    elements.rpc_cc = len(elements.rpc_components)
    elements.own_component = _own_component(elements.rpc_components, cells, sphere_center)

    # restricted faces
    for j, stats in elements.rpf.items():
        nodes = [t for t in tets if (h := _plane_of(cells[t], j)) is not None and cells[t].facet_area(h) > area_eps]
        edge_sets = {t: _face_edges(cells[t], j, eps) for t in nodes}

        def rpf_linked(a: int, b: int, edge_sets=edge_sets) -> bool:
            return bool(set(edge_sets[a]) & set(edge_sets[b]))

        def rpf_surface(tet: int, edge_sets=edge_sets):
            return [
                (mid, mesh.surface_by_face[face]) for face, mid in edge_sets[tet].items()
                if mesh.face_tets[face, 1] < 0
            ]

        def rpf_centroid(tet: int, j=j):
            return cells[tet].facet_centroid(_plane_of(cells[tet], j))

        stats.components = _components(nodes, rpf_linked, mesh, rpf_surface, rpf_centroid)
        stats.cc = len(stats.components)

    # restricted edges
    for (j, k), stats in elements.rpe.items():
        vertex_sets = {}
        for t in tets:
            found = _edge_vertices(cells[t], j, k, eps)
            if found is not None:
                vertex_sets[t] = found
        nodes = sorted(vertex_sets)

        def rpe_linked(a: int, b: int, vertex_sets=vertex_sets) -> bool:
            return bool(set(vertex_sets[a][0]) & set(vertex_sets[b][0]))

        def rpe_surface(tet: int, vertex_sets=vertex_sets):
            return [
                (point, mesh.surface_by_face[face]) for face, point in vertex_sets[tet][0].items()
                if mesh.face_tets[face, 1] < 0
            ]

        stats.components = _components(nodes, rpe_linked, mesh, rpe_surface, lambda t, vs=vertex_sets: vs[t][1])
        stats.cc = len(stats.components)

    logger.debug(
        f"Sphere {elements.sphere}: RPC cc={elements.rpc_cc}, {len(elements.rpf)} faces, "
        f"{len(elements.rpe)} edges, {len(patch)} surface fragments"
    )
    return elements


def _face_edges(cell, neighbor: int, eps: float) -> Dict[int, np.ndarray]:
    """Global tet face -> midpoint of the edge the restricted face shares with it."""
    h = _plane_of(cell, neighbor)
    result = {}
    for pair, (a, b) in cell.edges().items():
        if h not in pair:
            continue
        other = cell.planes[pair[0] if pair[1] == h else pair[1]]
        if other.is_radical:
            continue
        if np.linalg.norm(cell.points[a] - cell.points[b]) <= eps:
            continue
        result[other.ref] = 0.5 * (cell.points[a] + cell.points[b])
    return result


def _edge_vertices(cell, j: int, k: int, eps: float) -> Optional[Tuple[Dict[int, np.ndarray], np.ndarray]]:
    """Endpoints on tet faces of the cell edge between radical planes j and k, and its midpoint."""
    hj, hk = _plane_of(cell, j), _plane_of(cell, k)
    if hj is None or hk is None:
        return None
    pair = (min(hj, hk), max(hj, hk))
    ends = cell.edges().get(pair)
    if ends is None:
        return None
    a, b = ends
    if np.linalg.norm(cell.points[a] - cell.points[b]) <= eps:
        return None
    on_faces = {}
    for v in ends:
        for h in cell.triplets[v]:
            plane = cell.planes[int(h)]
            if not plane.is_radical:
                on_faces[plane.ref] = cell.points[v]
    return on_faces, 0.5 * (cell.points[a] + cell.points[b])


def _own_component(components: List[Component], cells: Mapping[int, object], center: np.ndarray) -> int:
    """Component containing the sphere center, else the one nearest to it."""
    if not components:
        return -1
    best, best_dist = 0, np.inf
    for k, component in enumerate(components):
        for tet in component.tets:
            cell = cells[tet]
            if cell.contains(center, eps=1e-9):
                return k
            dist = float(np.linalg.norm(cell.points - center, axis=1).min())
            if dist < best_dist:
                best, best_dist = k, dist
    return best
