"""Power-diagram adjacency of spheres via the 4D lifting map.

A sphere (c, r) lifts to (c, |c|^2 - r^2). Facets of the lower convex hull
of the lifted points are the tets of the regular triangulation; their edges
are the power-diagram adjacencies. Eight far ghost sites surround the input
so the hull is always full-dimensional.
"""

import logging
from typing import Dict, List, Sequence, Set, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from ..models.sphere import MedialSphere


logger = logging.getLogger(__name__)

NeighborMap = Dict[int, Set[int]]

GHOST_DISTANCE = 10.0


def _ghost_sites(centers: np.ndarray) -> np.ndarray:
    """Eight zero-radius sites on a perturbed cube far around the centers."""
    lo, hi = centers.min(axis=0), centers.max(axis=0)
    mid = 0.5 * (lo + hi)
    extent = max(float(np.linalg.norm(hi - lo)), 1.0)
    corners = np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)], dtype=float)
    jitter = np.array([[0.013, 0.007, 0.011], [0.002, 0.017, 0.005], [0.019, 0.003, 0.009],
                       [0.006, 0.014, 0.001], [0.011, 0.004, 0.016], [0.008, 0.018, 0.012],
                       [0.015, 0.010, 0.004], [0.001, 0.012, 0.019]])
    return mid + GHOST_DISTANCE * extent * (corners + jitter)


def _lift(centers: np.ndarray, weights: np.ndarray, origin: np.ndarray) -> np.ndarray:
    local = centers - origin
    return np.hstack([local, (np.einsum("ij,ij->i", local, local) - weights)[:, None]])


def _lower_hull(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    try:
        hull = ConvexHull(points)
    except QhullError:
        logger.warning("Lifted hull is degenerate; retrying with joggled input")
        hull = ConvexHull(points, qhull_options="QJ")
    lower = hull.equations[:, 3] < 0
    return hull.simplices[lower], hull.equations[lower]


def compute_sphere_neighbors(spheres: Sequence[MedialSphere]) -> NeighborMap:
    """Regular-triangulation adjacency keyed by sphere id; symmetric."""
    ids = [s.id for s in spheres]
    neighbors: NeighborMap = {i: set() for i in ids}
    if len(spheres) < 2:
        return neighbors
    if len(spheres) == 2:
        neighbors[ids[0]].add(ids[1])
        neighbors[ids[1]].add(ids[0])
        return neighbors

    centers = np.array([s.center for s in spheres])
    weights = np.array([s.weight for s in spheres])
    ghosts = _ghost_sites(centers)
    origin = centers.mean(axis=0)
    lifted = _lift(np.vstack([centers, ghosts]), np.concatenate([weights, np.zeros(len(ghosts))]), origin)
    n = len(spheres)
    simplices, _ = _lower_hull(lifted)

    on_hull = np.zeros(n, dtype=bool)
    for simplex in simplices:
        real = [int(k) for k in simplex if k < n]
        for k in real:
            on_hull[k] = True
        for a in range(len(real)):
            for b in range(a + 1, len(real)):
                neighbors[ids[real[a]]].add(ids[real[b]])
                neighbors[ids[real[b]]].add(ids[real[a]])

    hidden = np.flatnonzero(~on_hull)
    if hidden.size:
        points3 = lifted[:, :3]
        for k in hidden:
            for simplex in _facets_below(points3, simplices, points3[k]):
                for other in simplex:
                    if other < n and other != k:
                        neighbors[ids[k]].add(ids[other])
                        neighbors[ids[other]].add(ids[k])
        logger.debug(f"{hidden.size} hidden spheres attached to their covering hull facets")
    return neighbors


def _facets_below(points3: np.ndarray, simplices: np.ndarray, query: np.ndarray) -> List[np.ndarray]:
    """Lower-hull simplices whose 3D projection contains ``query``."""
    found = []
    best, best_slack = None, -np.inf
    for simplex in simplices:
        p = points3[simplex]
        frame = (p[1:] - p[0]).T
        try:
            lam = np.linalg.solve(frame, query - p[0])
        except np.linalg.LinAlgError:
            continue
        bary = np.concatenate([[1.0 - lam.sum()], lam])
        slack = float(bary.min())
        if slack >= -1e-12:
            found.append(simplex)
        elif slack > best_slack:
            best, best_slack = simplex, slack
    if not found and best is not None:
        found.append(best)
    return found


def validate_neighbors(spheres: Sequence[MedialSphere], tol_ratio: float = 1e-9) -> NeighborMap:
    """Brute-force adjacency by one linear program per pair.

    Spheres i and j are adjacent when some point on their radical plane is
    strictly power-closer to both than to every other site, ghosts included.
    """
    ids = [s.id for s in spheres]
    neighbors: NeighborMap = {i: set() for i in ids}
    n = len(spheres)
    if n < 2:
        return neighbors
    centers = np.array([s.center for s in spheres])
    weights = np.array([s.weight for s in spheres])
    ghosts = _ghost_sites(centers)
    all_centers = np.vstack([centers, ghosts])
    all_weights = np.concatenate([weights, np.zeros(len(ghosts))])
    origin = centers.mean(axis=0)
    local = all_centers - origin
    lifted = np.einsum("ij,ij->i", local, local) - all_weights
    scale = max(float(np.abs(local).max()), 1.0)
    tol = tol_ratio * scale * scale

    for i in range(n):
        for j in range(i + 1, n):
            # pow_k(x) - pow_i(x) = -2 x.(c_k - c_i) + (l_k - l_i) >= t for all k != i, j
            others = [k for k in range(len(all_centers)) if k not in (i, j)]
            a_ub = np.hstack([2.0 * (local[others] - local[i]), np.ones((len(others), 1))])
            b_ub = lifted[others] - lifted[i]
            a_eq = np.hstack([2.0 * (local[j] - local[i]), [0.0]])[None, :]
            b_eq = np.array([lifted[j] - lifted[i]])
            bounds = [(None, None)] * 3 + [(None, 1.0)]
            result = linprog(
                c=np.array([0.0, 0.0, 0.0, -1.0]), A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
                bounds=bounds, method="highs",
            )
            if result.status == 0 and -result.fun > tol:
                neighbors[ids[i]].add(ids[j])
                neighbors[ids[j]].add(ids[i])
    return neighbors
