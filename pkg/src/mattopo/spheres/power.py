"""Power distance between points and weighted spheres."""

from typing import Sequence

import numpy as np

from ..models.sphere import MedialSphere


def power_distance(sphere: MedialSphere, point: np.ndarray) -> float:
    """||p - center||^2 - r^2; negative inside the sphere."""
    diff = np.asarray(point, dtype=float) - sphere.center
    return float(diff @ diff) - sphere.weight


def power_distances(centers: np.ndarray, radii: np.ndarray, points: np.ndarray) -> np.ndarray:
    """(P, S) power distance table for points against spheres."""
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    centers = np.asarray(centers, dtype=float).reshape(-1, 3)
    radii = np.asarray(radii, dtype=float)
    diff = points[:, None, :] - centers[None, :, :]
    return np.einsum("psi,psi->ps", diff, diff) - (radii * radii)[None, :]


def power_nearest(spheres: Sequence[MedialSphere], points: np.ndarray) -> np.ndarray:
    """Index into ``spheres`` of the power-nearest sphere for each point."""
    centers = np.array([s.center for s in spheres])
    radii = np.array([s.radius for s in spheres])
    return np.argmin(power_distances(centers, radii, points), axis=1)
