"""Sphere-shrinking: the maximal inscribed sphere tangent at a pin point."""

import logging
from dataclasses import dataclass
from typing import Optional, Protocol

import numpy as np

from ..errors import SphereGenerationError
from ..models.sphere import MedialSphere, SphereKind
from ..models.tet_mesh import SurfaceSample, TetMesh


logger = logging.getLogger(__name__)


class SurfaceQuery(Protocol):
    """Anything answering nearest-surface-point queries."""
    bbox_diag: float

    def nearest(self, point: np.ndarray): ...


@dataclass
class ShrinkParams:
    """Sphere-shrinking parameters as fractions of the bbox diagonal."""
    init_ratio: float = 0.5
    eps_ratio: float = 1e-4
    max_iters: int = 50

    @classmethod
    def from_config(cls, config) -> "ShrinkParams":
        return cls(
            init_ratio=config.shrink_init_ratio,
            eps_ratio=config.shrink_eps_ratio,
            max_iters=config.shrink_max_iters,
        )


def _as_surface(surface) -> SurfaceQuery:
    if isinstance(surface, TetMesh):
        return surface.surface_index
    return surface


def sphere_shrink(
    surface,
    pin: SurfaceSample,
    params: Optional[ShrinkParams] = None,
    sphere_id: int = -1,
) -> MedialSphere:
    """Shrink a large sphere tangent at ``pin`` until no surface point lies inside.

    ``surface`` is a TetMesh or any object with ``nearest(point)`` and
    ``bbox_diag``. The normal of ``pin`` is the outward surface normal.
    A sphere that does not settle within ``max_iters`` is returned with
    ``converged=False``.
    """
    params = params or ShrinkParams()
    query = _as_surface(surface)
    diag = query.bbox_diag

    p = np.asarray(pin.position, dtype=float)
    normal = np.asarray(pin.normal, dtype=float)
    length = float(np.linalg.norm(normal))
    if not np.isfinite(length) or length < 1e-12:
        raise SphereGenerationError(f"Degenerate pin normal at {p.tolist()}")
    inward = -normal / length

    eps = params.eps_ratio * diag
    touch_tol = 1e-9 * diag
    radius = params.init_ratio * diag
    center = p + inward * radius
    partner = None
    converged = False

    for iteration in range(params.max_iters):
        hit = query.nearest(center)
        if hit.distance >= radius - touch_tol:
            converged = True
            break
        chord = hit.point - p
        reach = float(chord @ inward)
        chord_sq = float(chord @ chord)
        if chord_sq <= touch_tol * touch_tol or reach <= 1e-15 * diag:
            converged = True
            break
        new_radius = chord_sq / (2.0 * reach)
        if new_radius > radius:
            new_radius = radius
        change = radius - new_radius
        radius = new_radius
        center = p + inward * radius
        partner = (hit.point.copy(), hit.normal.copy())
        if change < eps:
            converged = True
            break
    else:
        logger.warning(f"Sphere shrink at {p.tolist()} did not converge in {params.max_iters} iterations")

    tangent = [(p.copy(), normal / length)]
    if partner is not None:
        tangent.append(partner)
    else:
        hit = query.nearest(center)
        tangent.append((hit.point.copy(), hit.normal.copy()))

    if radius <= 0:
        raise SphereGenerationError(f"Sphere shrink at {p.tolist()} collapsed to zero radius")
    return MedialSphere(
        id=sphere_id, center=center, radius=radius, kind=SphereKind.T2,
        tangent_points=tangent, converged=converged,
    )
