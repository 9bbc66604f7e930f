"""Surface of the union of enveloping volumes by grid contouring."""

import logging
from typing import Optional, Sequence

import numpy as np
from skimage.measure import marching_cubes

from ..geometry.envelope import EnvelopePrimitive, envelope_primitives
from ..models.medial_mesh import MedialMesh, TriangleMesh


logger = logging.getLogger(__name__)

PADDING_CELLS = 2


def distance_grid(prims: Sequence[EnvelopePrimitive], resolution: int):
    """Signed distance to the primitive union on a padded regular grid.

    Returns (values, origin, spacing). Values are exact near the surface
    and capped at a few cells away from every primitive.
    """
    balls = [p.bounding_ball() for p in prims]
    lo = np.min([c - r for c, r in balls], axis=0)
    hi = np.max([c + r for c, r in balls], axis=0)
    extent = float((hi - lo).max())
    if extent <= 0:
        raise ValueError("Envelope has no extent")
    spacing = extent / resolution
    origin = lo - PADDING_CELLS * spacing
    shape = np.ceil((hi - lo) / spacing).astype(int) + 2 * PADDING_CELLS + 1
    cap = 2.0 * PADDING_CELLS * spacing
    values = np.full(tuple(shape), cap)

    axes = [origin[d] + spacing * np.arange(shape[d]) for d in range(3)]
    for prim, (center, reach) in zip(prims, balls):
        start = np.maximum(np.floor((center - reach - origin) / spacing).astype(int) - PADDING_CELLS, 0)
        stop = np.minimum(np.ceil((center + reach - origin) / spacing).astype(int) + PADDING_CELLS + 1, shape)
        if np.any(stop <= start):
            continue
        gx, gy, gz = np.meshgrid(
            axes[0][start[0]:stop[0]], axes[1][start[1]:stop[1]], axes[2][start[2]:stop[2]], indexing="ij",
        )
        points = np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)
        block = prim.signed(points).reshape(gx.shape)
        view = values[start[0]:stop[0], start[1]:stop[1], start[2]:stop[2]]
        np.minimum(view, block, out=view)
    return values, origin, spacing


def reconstruct_envelope(medial: MedialMesh, resolution: int = 256, prims: Optional[Sequence[EnvelopePrimitive]] = None) -> TriangleMesh:
    """Watertight triangle mesh of the medial mesh's enveloping volume."""
    if resolution < 8:
        raise ValueError("Reconstruction resolution must be at least 8")
    prims = list(prims) if prims is not None else envelope_primitives(medial)
    if not prims:
        raise ValueError("Medial mesh has no primitives to reconstruct")

    values, origin, spacing = distance_grid(prims, resolution)
    radii = np.array([s.radius for s in medial.spheres.values() if not s.kind.is_feature])
    if radii.size and radii.min() < 2.0 * spacing:
        logger.warning(
            f"Grid spacing {spacing:.4g} is coarse for the smallest sphere (r={radii.min():.4g}); "
            f"thin parts may be lost"
        )
    if values.min() >= 0:
        raise ValueError("Envelope is thinner than the reconstruction grid")

    vertices, faces, _, _ = marching_cubes(values, level=0.0, spacing=(spacing, spacing, spacing))
    mesh = TriangleMesh(vertices=vertices + origin, faces=faces[:, ::-1])
    logger.info(f"Reconstructed envelope: {len(mesh.vertices)} vertices, {mesh.n_faces} faces at resolution {resolution}")
    return mesh
