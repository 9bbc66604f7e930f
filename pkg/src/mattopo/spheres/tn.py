"""Spheres tangent to three or more surface planes."""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import RankDeficientError
from ..models.sphere import MedialSphere, SphereKind


logger = logging.getLogger(__name__)

Plane = Tuple[np.ndarray, np.ndarray]


def _system(tangent_planes: Sequence[Plane]) -> Tuple[np.ndarray, np.ndarray]:
    """Rows [n, 1] . (center, r) = n . p for outward unit normals n."""
    normals = np.array([np.asarray(n, dtype=float) / np.linalg.norm(n) for _, n in tangent_planes])
    points = np.array([np.asarray(p, dtype=float) for p, _ in tangent_planes])
    a = np.hstack([normals, np.ones((len(normals), 1))])
    b = np.einsum("ij,ij->i", normals, points)
    return a, b


def tangency_residual(tangent_planes: Sequence[Plane], center: np.ndarray, radius: float) -> float:
    """Sum of squared tangency violations of (center, radius)."""
    a, b = _system(tangent_planes)
    x = np.concatenate([np.asarray(center, dtype=float), [radius]])
    r = a @ x - b
    return float(r @ r)


def _anchor_scale(tangent_planes: Sequence[Plane], center: np.ndarray) -> float:
    """Mean distance from ``center`` to the plane anchor points."""
    points = np.array([np.asarray(p, dtype=float) for p, _ in tangent_planes])
    return float(np.linalg.norm(points - center, axis=1).mean())


def _along_null_space(a: np.ndarray, x: np.ndarray, radius: float, tol: float = 1e-12) -> np.ndarray:
    """Move ``x`` inside the solution set of ``a`` until its radius is ``radius``.

    Only null-space directions are used, so the residual does not change.
    Returns ``x`` unchanged when no such direction moves the radius.
    """
    _, singular, vt = np.linalg.svd(a)
    rank = int(np.count_nonzero(singular > tol * max(singular[0], 1.0)))
    for direction in vt[rank:]:
        if abs(direction[3]) > tol:
            direction = direction / direction[3]
            return x + (radius - x[3]) * direction
    return x


def optimize_tn_sphere(
    tangent_planes: Sequence[Plane],
    init: MedialSphere,
    sphere_id: Optional[int] = None,
    rank_tol: float = 1e-6,
) -> MedialSphere:
    """Least-squares sphere tangent to every plane, on the inner side.

    Planes are (point, outward normal) pairs. The solution is the one
    closest to ``init`` among the least-squares minimizers, so the
    objective never exceeds its value at ``init``. When that minimizer has
    no positive radius and the minimizers form a family, the family member
    with the radius of ``init`` is returned instead (the mean anchor
    distance for a zero-radius ``init``).
    """
    if len(tangent_planes) < 3:
        raise RankDeficientError(f"Need at least 3 tangent planes, got {len(tangent_planes)}")
    a, b = _system(tangent_planes)
    singular = np.linalg.svd(a[:, :3], compute_uv=False)
    if singular.size < 3 or singular[2] < rank_tol * max(singular[0], 1.0):
        raise RankDeficientError("Tangent plane normals do not span 3D")

    x0 = np.concatenate([init.center, [init.radius]])
    delta, *_ = np.linalg.lstsq(a, b - a @ x0, rcond=None)
    x = x0 + delta
    if x[3] <= 0:
        target = init.radius if init.radius > 0 else _anchor_scale(tangent_planes, init.center)
        x = _along_null_space(a, x, target)
    center, radius = x[:3], float(x[3])
    if radius <= 0:
        raise RankDeficientError(f"Tangency solve gave non-positive radius {radius:.3g}")

    tangent: List[Tuple[np.ndarray, np.ndarray]] = []
    for (p, n), row in zip(tangent_planes, a):
        normal = row[:3]
        tangent.append((center + radius * normal, normal.copy()))
    return MedialSphere(
        id=init.id if sphere_id is None else sphere_id,
        center=center,
        radius=radius,
        kind=SphereKind.TN,
        tangent_points=tangent,
        n_tangent=len(tangent_planes),
    )
