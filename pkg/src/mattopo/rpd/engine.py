"""Restricted power diagram state and its full and partial computation."""

import logging
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

from ..errors import ClipDegeneracyError
from ..mesh.topology import mesh_euler
from ..models.config import RpdConfig
from ..models.sphere import MedialSphere
from ..models.tet_mesh import TetMesh
from ..models.topology import RestrictedElements
from ..topo.components import restricted_cc
from ..topo.euler import MeshPayloads, accumulate_sphere, explicit_euler, global_euler, init_fractional_euler
from .cell import ConvexCell, clip_cell
from .halfspace import radical_plane
from .neighbors import NeighborMap, compute_sphere_neighbors, validate_neighbors
from .relations import plane_distances, related_tets


logger = logging.getLogger(__name__)

# multiples of the clip tolerance
TOUCH_EPS = 10.0
SHIFT_EPS = 1000.0


@dataclass
class RpdState:
    """Cells, adjacency and per-sphere restricted elements of one sphere set.

    ``cells`` holds only nonempty cells, as sphere id -> tet -> cell.
    """
    mesh: TetMesh
    payloads: MeshPayloads
    eps: float
    max_perturbations: int = 3
    spheres: Dict[int, MedialSphere] = field(default_factory=dict)
    cells: Dict[int, Dict[int, ConvexCell]] = field(default_factory=dict)
    neighbors: NeighborMap = field(default_factory=dict)
    sphere_tets: Dict[int, np.ndarray] = field(default_factory=dict)
    elements: Dict[int, RestrictedElements] = field(default_factory=dict)
    dirty: Set[int] = field(default_factory=set)
    n_rounds: int = 0
    perturbations: int = 0

    def sphere_ids(self) -> List[int]:
        return sorted(self.spheres)

    def cells_of(self, sphere_id: int) -> List[ConvexCell]:
        table = self.cells.get(sphere_id, {})
        return [table[t] for t in sorted(table)]

    def cell(self, sphere_id: int, tet: int) -> Optional[ConvexCell]:
        return self.cells.get(sphere_id, {}).get(tet)

    @property
    def relations(self) -> Dict[int, Set[int]]:
        """Tet index -> ids of the spheres related to it."""
        table: Dict[int, Set[int]] = {}
        for sphere_id, tets in self.sphere_tets.items():
            for tet in tets:
                table.setdefault(int(tet), set()).add(sphere_id)
        return table

    def rpc_volume(self, sphere_id: int) -> float:
        return sum(c.volume() for c in self.cells_of(sphere_id))

    def tet_volume_sums(self) -> np.ndarray:
        """Total cell volume inside every tet."""
        sums = np.zeros(self.mesh.n_tets)
        for table in self.cells.values():
            for tet, cell in table.items():
                sums[tet] += cell.volume()
        return sums

    def empty_spheres(self) -> List[int]:
        """Active spheres whose restricted cell is empty."""
        return [i for i in self.sphere_ids() if not self.cells.get(i)]

    def owner_at(self, point: np.ndarray, eps: float = 0.0) -> Optional[int]:
        """Id of the sphere whose cell contains ``point``."""
        tet = self.mesh.tet_locator.locate(point)
        if tet < 0:
            return None
        for sphere_id, table in self.cells.items():
            cell = table.get(tet)
            if cell is not None and cell.contains(point, eps):
                return sphere_id
        return None

    def global_euler(self):
        return global_euler(self.elements)


def new_rpd_state(mesh: TetMesh, config: Optional[RpdConfig] = None) -> RpdState:
    """Empty state with mesh payloads initialized."""
    config = config or RpdConfig()
    # warm the cached adjacency so worker threads only read it
    _ = mesh.tet_faces, mesh.tet_edges, mesh.face_tets, mesh.surface_by_face, mesh.surface_normals
    return RpdState(
        mesh=mesh,
        payloads=init_fractional_euler(mesh),
        eps=config.clip_eps_ratio * mesh.bbox_diag,
        max_perturbations=config.max_perturbations,
    )


def separating_shift(distances: np.ndarray, toward_other: bool, eps: float) -> float:
    """Offset that moves a radical plane off every mesh vertex.

    ``distances`` are the signed vertex distances to the plane of a sphere and
    its neighbor. A plane within ``TOUCH_EPS * eps`` of a vertex is moved toward
    the sphere with the larger id, so both spheres of the pair pick the same
    geometric plane. Returns the offset to add on this sphere's side, 0.0 when
    no vertex is close.
    """
    touch = TOUCH_EPS * eps
    lower = distances if toward_other else -distances
    if (np.abs(lower) > touch).all():
        return 0.0
    for k in range(16):
        shift = SHIFT_EPS * eps * (1.0 + 0.37 * k)
        if (np.abs(lower + shift) > touch).all():
            break
    else:
        raise ClipDegeneracyError("No offset separates the radical plane from the mesh vertices")
    return shift if toward_other else -shift


def _clip_sphere(
    state: RpdState,
    sphere: MedialSphere,
    neighbors: List[MedialSphere],
) -> Tuple[np.ndarray, Dict[int, ConvexCell], int]:
    """Related tets, nonempty cells and perturbation count of one sphere."""
    mesh, eps = state.mesh, state.eps
    neighbors = sorted(neighbors, key=lambda m: m.id)
    planes = [radical_plane(sphere, other) for other in neighbors]
    reach = eps
    if neighbors:
        distances = plane_distances(sphere, neighbors, mesh.vertices)
        for k, other in enumerate(neighbors):
            shift = separating_shift(distances[:, k], sphere.id < other.id, eps)
            if shift:
                planes[k] = planes[k].shifted(shift)
                distances[:, k] += shift
                reach = max(reach, eps + abs(shift))
        # a plane matters for a tet only if it cuts one of the tet vertices off
        cuts = distances < -eps
    tets = related_tets(mesh, sphere, neighbors, reach)
    cells: Dict[int, ConvexCell] = {}
    perturbations = 0
    for tet in tets:
        tet = int(tet)
        if neighbors:
            active = np.flatnonzero(cuts[mesh.tets[tet]].any(axis=0))
            tet_planes = [planes[k] for k in active]
        else:
            tet_planes = []
        cell = clip_cell(mesh, tet, sphere.id, tet_planes, state.payloads, eps, state.max_perturbations)
        perturbations += cell.perturbations
        if not cell.empty:
            cells[tet] = cell
    return tets, cells, perturbations


def _analyze(state: RpdState, sphere_id: int) -> RestrictedElements:
    elements = accumulate_sphere(sphere_id, state.cells_of(sphere_id))
    return restricted_cc(state.mesh, state.spheres[sphere_id].center, state.cells.get(sphere_id, {}), elements, state.eps)


def compute_rpd_partial(
    state: RpdState,
    spheres: Iterable[MedialSphere],
    new_ids: Iterable[int],
    executor: Optional[Executor] = None,
    config: Optional[RpdConfig] = None,
) -> RpdState:
    """Update ``state`` for the active sphere set after insertions and deletions.

    Re-clips the new spheres, their neighbors, every sphere whose neighbor
    set changed and the former neighbors of deleted spheres. Cells of all
    other spheres are left untouched.
    """
    active = {s.id: s for s in spheres if s.is_active}
    new_ids = set(new_ids) & set(active)
    deleted = set(state.spheres) - set(active)
    if not new_ids and not deleted:
        logger.debug("No sphere changes; RPD unchanged")
        return state

    ordered = [active[i] for i in sorted(active)]
    neighbors = compute_sphere_neighbors(ordered)
    if config is not None and config.validate_neighbors:
        _check_neighbors(neighbors, validate_neighbors(ordered))

    dirty = set(new_ids)
    for i in new_ids:
        dirty |= neighbors[i]
    for i in deleted:
        dirty |= state.neighbors.get(i, set())
    for i in active:
        if neighbors[i] != state.neighbors.get(i):
            dirty.add(i)
    dirty &= set(active)

    for i in deleted:
        state.cells.pop(i, None)
        state.sphere_tets.pop(i, None)
        state.elements.pop(i, None)
    state.spheres = active
    state.neighbors = neighbors
    state.dirty = dirty

    jobs = sorted(dirty)

    def work(sphere_id: int):
        sphere = active[sphere_id]
        return _clip_sphere(state, sphere, [active[j] for j in neighbors[sphere_id]])

    results = list(executor.map(work, jobs)) if executor is not None else [work(i) for i in jobs]
    round_perturbations = 0
    for sphere_id, (tets, cells, perturbations) in zip(jobs, results):
        state.sphere_tets[sphere_id] = tets
        state.cells[sphere_id] = cells
        round_perturbations += perturbations

    analyzed = list(executor.map(lambda i: _analyze(state, i), jobs)) if executor is not None \
        else [_analyze(state, i) for i in jobs]
    for sphere_id, elements in zip(jobs, analyzed):
        state.elements[sphere_id] = elements

    state.perturbations += round_perturbations
    state.n_rounds += 1
    if round_perturbations:
        logger.warning(f"RPD round {state.n_rounds}: {round_perturbations} clip perturbations")
    empty = state.empty_spheres()
    if empty:
        logger.info(f"{len(empty)} spheres have an empty restricted cell: {empty[:10]}")
    logger.info(
        f"RPD round {state.n_rounds}: {len(active)} spheres, re-clipped {len(jobs)} "
        f"({len(new_ids)} new, {len(deleted)} deleted)"
    )
    if config is not None and config.validate_euler:
        validate_euler(state)
    return state


def compute_rpd(
    mesh: TetMesh,
    spheres: Iterable[MedialSphere],
    config: Optional[RpdConfig] = None,
    executor: Optional[Executor] = None,
) -> RpdState:
    """Full restricted power diagram of the active spheres."""
    spheres = [s for s in spheres if s.is_active]
    state = new_rpd_state(mesh, config)
    return compute_rpd_partial(state, spheres, [s.id for s in spheres], executor=executor, config=config)


def _check_neighbors(computed: NeighborMap, reference: NeighborMap) -> None:
    mismatched = [i for i in computed if computed[i] != reference.get(i, set())]
    if mismatched:
        logger.warning(f"Neighbor validation disagrees for spheres {mismatched[:10]}")
    else:
        logger.debug("Neighbor validation passed")


def validate_euler(state: RpdState) -> bool:
    """Compare accumulated Euler sums with the explicit complexes and the mesh total."""
    ok = True
    expected = mesh_euler(state.mesh)
    total = state.global_euler()
    if total != expected:
        logger.warning(f"Global Euler {total} differs from mesh Euler {expected}")
        ok = False
    for sphere_id, elements in state.elements.items():
        explicit = explicit_euler(state.cells_of(sphere_id), tol=10.0 * state.eps)
        if elements.rpc_euler != explicit:
            logger.warning(f"Sphere {sphere_id}: accumulated Euler {elements.rpc_euler} vs explicit {explicit}")
            ok = False
    return ok
