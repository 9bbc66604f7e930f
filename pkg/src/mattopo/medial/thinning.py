"""Removal of dual tets by elementary collapses."""

import logging
from itertools import combinations
from typing import Dict, List, Optional, Set, Tuple

from ..models.medial_mesh import Face, MedialMesh, Tet


logger = logging.getLogger(__name__)


def _faces_of(tet: Tet) -> List[Face]:
    return [tuple(f) for f in combinations(tet, 3)]


def _free_face(tet: Tet, owners: Dict[Face, Set[Tet]], radius: Dict[int, float]) -> Optional[Face]:
    """Face of ``tet`` owned by no other tet, opposite the largest member sphere."""
    free = [f for f in _faces_of(tet) if owners[f] == {tet}]
    if not free:
        return None

    def opposite_radius(face: Face) -> Tuple[float, int]:
        apex = next(v for v in tet if v not in face)
        return (radius[apex], -apex)

    return max(free, key=opposite_radius)


def thin_medial_mesh(medial: MedialMesh) -> MedialMesh:
    """Collapse every dual tet through one free face, least significant tets first.

    Significance is the smallest member radius. A tet whose faces are all
    shared waits until a neighbor has been collapsed; if no tet can move,
    the rest lose their interiors only.
    """
    if not medial.tets:
        return medial
    radius = {i: s.radius for i, s in medial.spheres.items()}
    faces = set(medial.faces)
    owners: Dict[Face, Set[Tet]] = {}
    for tet in medial.tets:
        for face in _faces_of(tet):
            faces.add(face)
            owners.setdefault(face, set()).add(tet)

    pending = sorted(medial.tets, key=lambda t: (min(radius[v] for v in t), t))
    collapsed = 0
    while pending:
        progress = False
        deferred = []
        for tet in pending:
            face = _free_face(tet, owners, radius)
            if face is None:
                deferred.append(tet)
                continue
            faces.discard(face)
            for f in _faces_of(tet):
                owners[f].discard(tet)
            collapsed += 1
            progress = True
        pending = deferred
        if not progress:
            logger.warning(f"{len(pending)} dual tets have no free face; removing interiors only")
            break

    thinned = MedialMesh(
        spheres=dict(medial.spheres),
        vertices=list(medial.vertices),
        edges=list(medial.edges),
        faces=sorted(faces),
        tets=[],
        tets_pruned=medial.tets_pruned + len(medial.tets),
    )
    thinned.restore_closure()
    logger.info(f"Thinning removed {len(medial.tets)} dual tets ({collapsed} collapsed through a free face)")
    return thinned
