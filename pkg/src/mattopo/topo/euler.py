"""Fractional Euler characteristic bookkeeping.

Every vertex, edge and face of the tet complex carries 1/valence, where the
valence is the number of tets sharing it; tets carry 1. Clipping passes these
shares on to the elements it creates, so summing the signed shares of the
cells of one sphere gives the Euler characteristic of its restricted cell
without ever assembling the cell globally.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from ..models.tet_mesh import TetMesh
from ..models.topology import ElementStats, RestrictedElements
from .components import UnionFind


logger = logging.getLogger(__name__)


@dataclass
class MeshPayloads:
    """Unsigned payload of every vertex, edge, face and tet of the mesh."""
    vertex: List[Fraction]
    edge: List[Fraction]
    face: List[Fraction]
    cell: List[Fraction]

    def signed_total(self, mesh: TetMesh) -> Fraction:
        """Alternating sum over the tet-local copies; equals the mesh Euler characteristic."""
        total = Fraction(0)
        for tet in range(mesh.n_tets):
            total += sum((self.vertex[v] for v in mesh.tets[tet]), Fraction(0))
            total -= sum((self.edge[e] for e in mesh.tet_edges[tet]), Fraction(0))
            total += sum((self.face[f] for f in mesh.tet_faces[tet]), Fraction(0))
            total -= self.cell[tet]
        return total


def simplex_payloads(simplices: Sequence[Sequence[int]]) -> Dict[int, Dict[Tuple[int, ...], Fraction]]:
    """Payloads of all faces of a pure complex given by its top simplices.

    Works in any dimension: returns dimension -> sorted face -> 1/valence.
    """
    valence: Dict[Tuple[int, ...], int] = {}
    for simplex in simplices:
        simplex = sorted(int(v) for v in simplex)
        for size in range(1, len(simplex) + 1):
            for face in combinations(simplex, size):
                valence[face] = valence.get(face, 0) + 1
    result: Dict[int, Dict[Tuple[int, ...], Fraction]] = {}
    for face, count in valence.items():
        result.setdefault(len(face) - 1, {})[face] = Fraction(1, count)
    return result


def signed_sum(
    payloads: Mapping[int, Mapping[Tuple[int, ...], Fraction]],
    simplices: Sequence[Sequence[int]],
) -> Fraction:
    """Alternating sum of the payload copies held by each top simplex.

    Every top simplex holds its own copy of the payload of each of its faces,
    so a face of valence k contributes k * 1/k = 1 in total.
    """
    total = Fraction(0)
    for simplex in simplices:
        simplex = sorted(int(v) for v in simplex)
        for size in range(1, len(simplex) + 1):
            dim = size - 1
            part = sum((payloads[dim][face] for face in combinations(simplex, size)), Fraction(0))
            total += part if dim % 2 == 0 else -part
    return total


def init_fractional_euler(mesh: TetMesh) -> MeshPayloads:
    """1/valence for every mesh element; the signed sum equals the mesh Euler characteristic."""
    payloads = MeshPayloads(
        vertex=[Fraction(1, int(k)) if k else Fraction(0) for k in mesh.vertex_valence],
        edge=[Fraction(1, int(k)) for k in mesh.edge_valence],
        face=[Fraction(1, int(k)) for k in mesh.face_valence],
        cell=[Fraction(1)] * mesh.n_tets,
    )
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(f"Initialized payloads for {mesh.n_tets} tets, signed total {payloads.signed_total(mesh)}")
    return payloads


def accumulate_sphere(sphere_id: int, cells: Iterable) -> RestrictedElements:
    """Euler sums and measures of the restricted elements of one sphere."""
    elements = RestrictedElements(sphere=sphere_id)
    for cell in cells:
        if cell.empty:
            continue
        elements.rpc_euler += cell.euler_payloads()
        elements.rpc_volume += cell.volume()

        radical = {h: cell.planes[h].ref for h in cell.facet_payload if cell.planes[h].is_radical}
        if not radical:
            continue
        triplets = [tuple(int(x) for x in tri) for tri in cell.triplets]

        for h, j in radical.items():
            value = cell.facet_payload[h].value
            value += sum((cell.vertex_payload[v].value for v, tri in enumerate(triplets) if h in tri), Fraction(0))
            value -= sum((p.value for pair, p in cell.edge_payload.items() if h in pair), Fraction(0))
            stats = elements.rpf.setdefault(j, ElementStats())
            stats.euler += value
            stats.measure += cell.facet_area(h)

        ends = cell.edges()
        for pair, payload in cell.edge_payload.items():
            if pair[0] not in radical or pair[1] not in radical:
                continue
            key = tuple(sorted((radical[pair[0]], radical[pair[1]])))
            value = -payload.value
            value += sum(
                (cell.vertex_payload[v].value for v, tri in enumerate(triplets) if pair[0] in tri and pair[1] in tri),
                Fraction(0),
            )
            stats = elements.rpe.setdefault(key, ElementStats())
            stats.euler += value
            if pair in ends:
                a, b = ends[pair]
                stats.measure += float(np.linalg.norm(cell.points[a] - cell.points[b]))

        for v, tri in enumerate(triplets):
            if all(h in radical for h in tri):
                key = tuple(sorted(radical[h] for h in tri))
                elements.rpv[key] = elements.rpv.get(key, Fraction(0)) + cell.vertex_payload[v].value
    return elements


def accumulate_euler(state) -> Dict[int, RestrictedElements]:
    """Per-sphere Euler sums over the cells of an RPD state."""
    return {
        sphere_id: accumulate_sphere(sphere_id, state.cells_of(sphere_id))
        for sphere_id in sorted(state.sphere_ids())
    }


def global_euler(elements: Mapping[int, RestrictedElements]) -> Fraction:
    """Inclusion-exclusion total over all restricted elements; equals the mesh Euler characteristic."""
    return sum((e.signed_total() for e in elements.values()), Fraction(0))


def _merged_vertex_ids(cells: Sequence, tol: float) -> List[np.ndarray]:
    """Canonical ids of every cell vertex after merging coincident positions."""
    blocks = [cell.points for cell in cells]
    if not blocks:
        return []
    points = np.vstack(blocks)
    uf = UnionFind(len(points))
    for a, b in cKDTree(points).query_pairs(tol):
        uf.union(a, b)
    roots = np.array([uf.find(k) for k in range(len(points))])
    ids, start = [], 0
    for block in blocks:
        ids.append(roots[start:start + len(block)])
        start += len(block)
    return ids


def explicit_euler(cells: Iterable, tol: float, neighbor: Optional[int] = None) -> int:
    """V - E + F - C of the geometrically merged complex of one sphere's cells.

    With ``neighbor`` given, counts V - E + F of the restricted face shared
    with that sphere instead.
    """
    cells = [c for c in cells if not c.empty]
    vertex_ids = _merged_vertex_ids(cells, tol)
    vertices, edges, faces = set(), set(), set()
    n_cells = 0
    for cell, ids in zip(cells, vertex_ids):
        if neighbor is None:
            selected = set(cell.facet_payload)
            n_cells += 1
        else:
            selected = {h for h in cell.facet_payload if cell.planes[h].is_radical and cell.planes[h].ref == neighbor}
            if not selected:
                continue
        for v, tri in enumerate(cell.triplets):
            if neighbor is None or any(int(h) in selected for h in tri):
                vertices.add(int(ids[v]))
        for pair, (a, b) in cell.edges().items():
            if neighbor is not None and not (pair[0] in selected or pair[1] in selected):
                continue
            key = frozenset((int(ids[a]), int(ids[b])))
            if len(key) == 2:
                edges.add(key)
        for h in selected:
            key = frozenset(int(ids[v]) for v in cell.facet_polygon(h))
            if len(key) >= 3:
                faces.add(key)
    return len(vertices) - len(edges) + len(faces) - n_cells
