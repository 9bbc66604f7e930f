"""Medial mesh as the dual of the restricted power diagram."""

import logging
from typing import Dict

from ..models.medial_mesh import MedialMesh
from ..models.topology import RestrictedElements


logger = logging.getLogger(__name__)


def extract_dual(state) -> MedialMesh:
    """Vertex per nonempty RPC, edge per RPF, face per RPE, tet candidate per RPV."""
    elements: Dict[int, RestrictedElements] = state.elements
    present = {i for i in state.sphere_ids() if state.cells.get(i)}
    edges, faces, tets = set(), set(), set()
    for i in sorted(present):
        elem = elements.get(i)
        if elem is None:
            continue
        for j, stats in elem.rpf.items():
            if stats.present and j in present:
                edges.add(tuple(sorted((i, j))))
        for (j, k), stats in elem.rpe.items():
            if stats.present and j in present and k in present:
                faces.add(tuple(sorted((i, j, k))))
        for key in elem.rpv:
            if all(x in present for x in key):
                tets.add(tuple(sorted((i,) + key)))

    medial = MedialMesh(
        spheres={i: state.spheres[i] for i in present},
        vertices=sorted(present),
        edges=sorted(edges),
        faces=sorted(faces),
        tets=sorted(tets),
    )
    if not medial.is_closed():
        logger.debug("Restoring closure of the extracted medial mesh")
        medial.restore_closure()
    logger.info(
        f"Extracted medial mesh: {len(medial.vertices)} vertices, {len(medial.edges)} edges, "
        f"{len(medial.faces)} faces, {len(medial.tets)} tet candidates"
    )
    return medial
