"""Topology check-and-fix: every restricted element must be a disk or ball.

An RPC, RPF or RPE is acceptable when it has one connected component and
Euler characteristic one. Each violation yields a pin point on the surface
and a new shrink sphere there.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Mapping, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from ..errors import SphereGenerationError, TopologyFixError
from ..models.config import PinStrategy
from ..models.sphere import MedialSphere
from ..models.tet_mesh import SampleKind, SurfaceSample, TetMesh
from ..models.topology import Component, RestrictedElements, TopoReport, TopoViolation, ViolationKind
from ..spheres.shrink import ShrinkParams, sphere_shrink


logger = logging.getLogger(__name__)

ONE = Fraction(1)


@dataclass
class PinChoice:
    """How a pin point is picked among the candidates of a component."""
    strategy: PinStrategy = PinStrategy.FARTHEST
    rng: Optional[np.random.Generator] = None

    def pick(self, candidates: np.ndarray, centers_tree: Optional[cKDTree], anchor: Optional[np.ndarray] = None) -> int:
        """Index of the chosen candidate.

        FARTHEST takes the candidate farthest from ``anchor`` when given,
        else farthest from every sphere center.
        """
        if self.strategy is PinStrategy.RANDOM and self.rng is not None:
            return int(self.rng.integers(len(candidates)))
        if anchor is not None:
            dist = np.linalg.norm(candidates - anchor, axis=1)
        elif centers_tree is not None:
            dist, _ = centers_tree.query(candidates)
        else:
            return 0
        return int(np.argmax(dist))


def _pin_on(
    mesh: TetMesh,
    component: Component,
    choice: PinChoice,
    centers_tree: Optional[cKDTree],
    anchor: Optional[np.ndarray] = None,
) -> SurfaceSample:
    """Surface pin inside ``component``, or the surface point nearest its centroid."""
    if component.reaches_surface:
        k = choice.pick(component.surface_points, centers_tree, anchor)
        tri = int(component.surface_triangles[k])
        return SurfaceSample(
            position=np.asarray(component.surface_points[k], dtype=float),
            normal=mesh.surface_normals[tri].copy(), kind=SampleKind.SURFACE, source=tri,
        )
    hit = mesh.surface_index.nearest(component.centroid)
    return SurfaceSample(position=hit.point, normal=hit.normal, kind=SampleKind.SURFACE, source=hit.triangle)


def _rpc_violations(
    mesh: TetMesh,
    sphere: MedialSphere,
    elements: RestrictedElements,
    choice: PinChoice,
    centers_tree: cKDTree,
) -> List[Tuple[TopoViolation, SurfaceSample]]:
    found = []
    if elements.rpc_cc > 1:
        for k, component in enumerate(elements.rpc_components):
            if k == elements.own_component:
                continue
            pin = _pin_on(mesh, component, choice, centers_tree)
            found.append((TopoViolation(sphere.id, "rpc", ViolationKind.CC, pin.position, elements.rpc_cc), pin))
    elif elements.rpc_euler != ONE:
        if not elements.surface_patch:
            raise TopologyFixError(
                f"Sphere {sphere.id} has Euler {elements.rpc_euler} but its cell touches no surface"
            )
        if choice.strategy is PinStrategy.RANDOM and choice.rng is not None:
            fragment = elements.surface_patch[int(choice.rng.integers(len(elements.surface_patch)))]
        else:
            # the surface fragment farthest from the center
            dist = [float(np.linalg.norm(f.centroid - sphere.center)) for f in elements.surface_patch]
            fragment = elements.surface_patch[int(np.argmax(dist))]
        pin = SurfaceSample(
            position=fragment.centroid.copy(), normal=fragment.normal.copy(),
            kind=SampleKind.SURFACE, source=fragment.triangle,
        )
        found.append((TopoViolation(sphere.id, "rpc", ViolationKind.EULER, pin.position, elements.rpc_euler), pin))
    return found


def _shared_violations(
    mesh: TetMesh,
    sphere_id: int,
    label: str,
    stats,
    choice: PinChoice,
    centers_tree: cKDTree,
) -> List[Tuple[TopoViolation, SurfaceSample]]:
    """Violations of one restricted face or edge, seen from ``sphere_id``."""
    if stats.cc == 0:
        return []
    found = []
    if stats.cc > 1:
        largest = max(range(stats.cc), key=lambda k: (len(stats.components[k].tets), -k))
        for k, component in enumerate(stats.components):
            if k == largest:
                continue
            pin = _pin_on(mesh, component, choice, centers_tree)
            found.append((TopoViolation(sphere_id, label, ViolationKind.CC, pin.position, stats.cc), pin))
    elif stats.euler != ONE:
        pin = _pin_on(mesh, stats.components[0], choice, centers_tree)
        found.append((TopoViolation(sphere_id, label, ViolationKind.EULER, pin.position, stats.euler), pin))
    return found


def find_violations(
    mesh: TetMesh,
    spheres: Mapping[int, MedialSphere],
    elements: Mapping[int, RestrictedElements],
    choice: Optional[PinChoice] = None,
) -> List[Tuple[TopoViolation, SurfaceSample]]:
    """Every violating element with its pin point.

    Restricted faces and edges are shared by two or three spheres; each is
    examined once, from the sphere with the smallest id.
    """
    choice = choice or PinChoice()
    ids = sorted(i for i in elements if i in spheres)
    if not ids:
        return []
    centers_tree = cKDTree(np.array([spheres[i].center for i in ids]))
    found = []
    for i in ids:
        sphere, elem = spheres[i], elements[i]
        if elem.empty:
            continue
        found.extend(_rpc_violations(mesh, sphere, elem, choice, centers_tree))
        for j in sorted(elem.rpf):
            if j > i:
                found.extend(_shared_violations(mesh, i, f"rpf({i},{j})", elem.rpf[j], choice, centers_tree))
        for j, k in sorted(elem.rpe):
            if i < j:
                found.extend(_shared_violations(mesh, i, f"rpe({i},{j},{k})", elem.rpe[(j, k)], choice, centers_tree))
    return found


def check_topology(state, choice: Optional[PinChoice] = None, round_index: int = 0) -> TopoReport:
    """Violations of the current RPD, without inserting anything."""
    found = find_violations(state.mesh, state.spheres, state.elements, choice)
    return TopoReport(violations=[v for v, _ in found], round_index=round_index)


def _dedup(spheres: Iterable[MedialSphere], dup_eps: float) -> List[MedialSphere]:
    kept: List[MedialSphere] = []
    for sphere in spheres:
        if all(np.linalg.norm(sphere.center - other.center) >= dup_eps for other in kept):
            kept.append(sphere)
    return kept


def check_and_fix_topology(
    state,
    mesh: TetMesh,
    params: Optional[ShrinkParams] = None,
    dup_eps: float = 0.0,
    choice: Optional[PinChoice] = None,
    report: Optional[TopoReport] = None,
) -> List[MedialSphere]:
    """New shrink spheres pinned in every violating element.

    ``report``, when given, receives the violations found.
    """
    found = find_violations(mesh, state.spheres, state.elements, choice)
    if report is not None:
        report.violations = [v for v, _ in found]
    spheres = []
    for violation, pin in found:
        try:
            sphere = sphere_shrink(mesh, pin, params)
        except SphereGenerationError as exc:
            logger.warning(f"Topology fix for sphere {violation.sphere} ({violation.element}) skipped: {exc}")
            continue
        logger.debug(
            f"Sphere {violation.sphere} {violation.element} {violation.kind.value} ({violation.value}): "
            f"pin {pin.position.round(3).tolist()} -> r={sphere.radius:.4g}"
        )
        spheres.append(sphere)
    batch = _dedup(spheres, dup_eps)
    if found:
        logger.info(f"Topology: {len(found)} violations, {len(batch)} new spheres")
    return batch
