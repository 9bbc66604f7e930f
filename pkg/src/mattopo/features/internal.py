"""Internal features: seam spheres where a medial edge crosses from one sheet to another.

Two spheres joined by a medial edge lie on the same sheet when their RPC
surface patches face the same directions. The patch normals of each sphere
are grouped into tangent-direction clusters; a mismatch between the two
cluster sets means the edge jumps across a seam, and a T_N sphere tangent
to the planes of both is inserted between them.
"""

import itertools
import logging
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import RankDeficientError, SphereGenerationError
from ..models.config import FeatureConfig
from ..models.features import SheetQueueEntry, SheetStatus
from ..models.sphere import MedialSphere, SphereKind
from ..models.tet_mesh import SampleKind, SurfaceSample, TetMesh
from ..models.topology import SurfaceFragment
from ..spheres.shrink import ShrinkParams, sphere_shrink
from ..spheres.tn import optimize_tn_sphere


logger = logging.getLogger(__name__)

Edge = Tuple[int, int]

# Above this many clusters the permutation test falls back to greedy matching.
MAX_PERMUTED = 6


@dataclass
class NormalCluster:
    """Area-weighted group of patch normals, read as one tangent plane."""
    normal: np.ndarray
    point: np.ndarray
    area: float

    @property
    def plane(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.point, self.normal


def _angle(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.degrees(np.arccos(np.clip(a @ b, -1.0, 1.0))))


def _merge(clusters: List[NormalCluster], normal: np.ndarray, point: np.ndarray, area: float,
           angle_deg: float) -> None:
    for cluster in clusters:
        if _angle(cluster.normal, normal) <= angle_deg:
            total = cluster.area + area
            mean = cluster.normal * cluster.area + normal * area
            length = float(np.linalg.norm(mean))
            if length > 0:
                cluster.normal = mean / length
            cluster.point = (cluster.point * cluster.area + point * area) / total
            cluster.area = total
            return
    clusters.append(NormalCluster(normal=normal.copy(), point=point.copy(), area=area))


def cluster_normals(
    fragments: Sequence[SurfaceFragment],
    angle_deg: float = 30.0,
    min_fraction: float = 0.05,
) -> List[NormalCluster]:
    """Greedy clustering of outward patch normals, largest fragments first.

    Clusters holding less than ``min_fraction`` of the patch area are
    dropped unless that would drop them all.
    """
    clusters: List[NormalCluster] = []
    for fragment in sorted(fragments, key=lambda f: -f.area):
        if fragment.area <= 0:
            continue
        normal = np.asarray(fragment.normal, dtype=float)
        normal = normal / np.linalg.norm(normal)
        _merge(clusters, normal, np.asarray(fragment.centroid, dtype=float), fragment.area, angle_deg)
    total = sum(c.area for c in clusters)
    kept = [c for c in clusters if c.area >= min_fraction * total]
    return sorted(kept or clusters, key=lambda c: -c.area)


def merge_planes(clusters: Iterable[NormalCluster], angle_deg: float) -> List[NormalCluster]:
    """Union of cluster sets with near-parallel planes folded together."""
    merged: List[NormalCluster] = []
    for cluster in clusters:
        _merge(merged, cluster.normal, cluster.point, cluster.area, angle_deg)
    return merged


def clusters_match(a: Sequence[NormalCluster], b: Sequence[NormalCluster], angle_deg: float) -> bool:
    """True when the sets have equal size and pair up within ``angle_deg``."""
    if len(a) != len(b):
        return False
    if not a:
        return True
    cost = np.array([[_angle(x.normal, y.normal) for y in b] for x in a])
    if len(a) <= MAX_PERMUTED:
        return any(
            all(cost[i, j] <= angle_deg for i, j in enumerate(perm))
            for perm in itertools.permutations(range(len(b)))
        )
    used = set()
    for i in range(len(a)):
        free = [j for j in np.argsort(cost[i]) if j not in used]
        if not free or cost[i, free[0]] > angle_deg:
            return False
        used.add(int(free[0]))
    return True


def sphere_clusters(state, sphere_id: int, config: FeatureConfig) -> List[NormalCluster]:
    elements = state.elements.get(sphere_id)
    if elements is None:
        return []
    return cluster_normals(elements.surface_patch, config.sheet_angle_deg, config.min_cluster_fraction)


def check_internal_feature_pair(state, mi: int, mj: int, config: Optional[FeatureConfig] = None) -> SheetStatus:
    """SAME_SHEET or CROSS_SHEET for the medial edge (mi, mj)."""
    config = config or FeatureConfig()
    if mi == mj:
        return SheetStatus.SAME_SHEET
    ci = sphere_clusters(state, mi, config)
    cj = sphere_clusters(state, mj, config)
    if not ci or not cj:
        logger.warning(f"Empty surface patch on edge ({mi}, {mj}); treating it as same-sheet")
        return SheetStatus.SAME_SHEET
    if clusters_match(ci, cj, config.sheet_angle_deg):
        return SheetStatus.SAME_SHEET
    logger.debug(f"Edge ({mi}, {mj}) crosses sheets: {len(ci)} vs {len(cj)} clusters")
    return SheetStatus.CROSS_SHEET


def medial_edges(state) -> List[Edge]:
    """Pairs of nonempty spheres sharing a present RPF."""
    present = {i for i in state.sphere_ids() if state.cells.get(i)}
    edges = set()
    for i in present:
        elements = state.elements.get(i)
        if elements is None:
            continue
        for j, stats in elements.rpf.items():
            if stats.present and j in present:
                edges.add((min(i, j), max(i, j)))
    return sorted(edges)


def _checkable(state, edge: Edge) -> bool:
    """Feature spheres belong to the external pass and seam spheres already mark a seam."""
    return all(
        not state.spheres[k].kind.is_feature and state.spheres[k].kind is not SphereKind.TN for k in edge
    )


def _valid_seam_sphere(mesh: TetMesh, sphere: MedialSphere, tan_eps: float) -> bool:
    if sphere.radius <= 0 or not mesh.contains(sphere.center):
        return False
    hit = mesh.surface_index.nearest(sphere.center)
    return abs(hit.distance - sphere.radius) <= tan_eps


def _fallback(mesh: TetMesh, midpoint: np.ndarray, params: Optional[ShrinkParams]) -> Optional[MedialSphere]:
    hit = mesh.surface_index.nearest(midpoint)
    pin = SurfaceSample(position=hit.point, normal=hit.normal, kind=SampleKind.SURFACE, source=hit.triangle)
    try:
        return sphere_shrink(mesh, pin, params)
    except SphereGenerationError as exc:
        logger.warning(f"Seam fallback shrink at {hit.point.tolist()} failed: {exc}")
        return None


def seam_sphere(
    state,
    mesh: TetMesh,
    edge: Edge,
    config: FeatureConfig,
    params: Optional[ShrinkParams] = None,
    tan_eps: float = 0.0,
) -> Optional[MedialSphere]:
    """T_N sphere tangent to the merged planes of both endpoints, or a shrink fallback."""
    a, b = (state.spheres[k] for k in edge)
    midpoint = 0.5 * (a.center + b.center)
    planes = merge_planes(
        sphere_clusters(state, edge[0], config) + sphere_clusters(state, edge[1], config),
        config.sheet_angle_deg,
    )
    if len(planes) >= 3:
        init = MedialSphere(id=-1, center=midpoint, radius=0.5 * (a.radius + b.radius), kind=SphereKind.T2)
        try:
            sphere = optimize_tn_sphere([c.plane for c in planes], init)
            if _valid_seam_sphere(mesh, sphere, tan_eps):
                return sphere
            logger.debug(f"Seam sphere for edge {edge} failed validation; shrinking instead")
        except RankDeficientError as exc:
            logger.debug(f"Seam solve for edge {edge} failed: {exc}")
    return _fallback(mesh, midpoint, params)


def preserve_internal_features(
    state,
    mesh: TetMesh,
    config: Optional[FeatureConfig] = None,
    rng: Optional[np.random.Generator] = None,
    statuses: Optional[Dict[Edge, SheetStatus]] = None,
    params: Optional[ShrinkParams] = None,
    tan_eps: float = 0.0,
    edges: Optional[Sequence[Edge]] = None,
    executor: Optional[Executor] = None,
) -> List[MedialSphere]:
    """Seam spheres for every cross-sheet medial edge, in seeded-random order.

    ``statuses`` persists across rounds; an edge fixed once is not queued
    again. A sphere takes part in at most one fix per call.
    """
    config = config or FeatureConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    statuses = statuses if statuses is not None else {}
    edges = list(edges) if edges is not None else medial_edges(state)

    queue = [
        SheetQueueEntry(edge=e) for e in edges
        if statuses.get(e) is not SheetStatus.CROSS_SHEET_FIXED and _checkable(state, e)
    ]
    order = rng.permutation(len(queue))
    queue = [queue[k] for k in order]

    def check(entry: SheetQueueEntry) -> SheetStatus:
        return check_internal_feature_pair(state, entry.edge[0], entry.edge[1], config)

    results = list(executor.map(check, queue)) if executor is not None else [check(e) for e in queue]

    new: List[MedialSphere] = []
    touched = set()
    for entry, status in zip(queue, results):
        entry.status = status
        statuses[entry.edge] = status
        if status is not SheetStatus.CROSS_SHEET or touched.intersection(entry.edge):
            continue
        sphere = seam_sphere(state, mesh, entry.edge, config, params, tan_eps)
        statuses[entry.edge] = entry.status = SheetStatus.CROSS_SHEET_FIXED
        touched.update(entry.edge)
        if sphere is not None:
            new.append(sphere)

    if queue:
        n_cross = sum(1 for s in results if s is SheetStatus.CROSS_SHEET)
        logger.info(f"Internal features: {len(queue)} edges checked, {n_cross} cross-sheet, {len(new)} inserted")
    return new
