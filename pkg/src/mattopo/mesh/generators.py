"""Programmatic tetrahedralizations of simple solids.

Structured grids are split into six tets per cell along the same main
diagonal, so neighbouring cells share conforming faces. Curved solids are
obtained by mapping the grid nodes.
"""

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

from ..models.tet_mesh import TetMesh
from .builder import build_tet_mesh


logger = logging.getLogger(__name__)

# A=(0,0,0) ... H=(1,1,1) in (i, j, k) offsets
_CUBE_OFFSETS = {
    "A": (0, 0, 0), "B": (1, 0, 0), "C": (0, 1, 0), "D": (1, 1, 0),
    "E": (0, 0, 1), "F": (1, 0, 1), "G": (0, 1, 1), "H": (1, 1, 1),
}
_SIX_TETS = ("ABDH", "ABFH", "ACDH", "ACGH", "AEFH", "AEGH")


def orient_tets(vertices: np.ndarray, tets: np.ndarray) -> np.ndarray:
    """Swap two vertices of every negatively oriented tet."""
    tets = np.array(tets, dtype=np.int64)
    p = vertices[tets]
    volume = np.einsum("ij,ij->i", p[:, 1] - p[:, 0], np.cross(p[:, 2] - p[:, 0], p[:, 3] - p[:, 0]))
    flip = volume < 0
    tets[flip, 2], tets[flip, 3] = tets[flip, 3].copy(), tets[flip, 2].copy()
    return tets


def _compact(vertices: np.ndarray, tets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    used, inverse = np.unique(tets, return_inverse=True)
    return vertices[used], inverse.reshape(tets.shape)


def grid_tets(
    shape: Tuple[int, int, int],
    node_position: Callable[[np.ndarray], np.ndarray],
    keep_cell: Optional[Callable[[int, int, int], bool]] = None,
    wrap_i: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """Tetrahedralize an ni x nj x nk cell grid.

    ``node_position`` maps an (N, 3) array of integer node coordinates to
    positions. With ``wrap_i`` the first axis is periodic.
    """
    ni, nj, nk = shape
    nodes_i = ni if wrap_i else ni + 1

    def node_id(i: int, j: int, k: int) -> int:
        if wrap_i:
            i %= ni
        return i + nodes_i * (j + (nj + 1) * k)

    grid = np.array(
        [(i, j, k) for k in range(nk + 1) for j in range(nj + 1) for i in range(nodes_i)], dtype=float,
    )
    vertices = node_position(grid)

    tets = []
    for k in range(nk):
        for j in range(nj):
            for i in range(ni):
                if keep_cell is not None and not keep_cell(i, j, k):
                    continue
                corner = {
                    name: node_id(i + di, j + dj, k + dk) for name, (di, dj, dk) in _CUBE_OFFSETS.items()
                }
                for pattern in _SIX_TETS:
                    tets.append([corner[c] for c in pattern])
    tets = orient_tets(vertices, np.array(tets, dtype=np.int64))
    return _compact(vertices, tets)


def regular_tet(edge: float = 1.0, normalize: bool = False) -> TetMesh:
    """Single regular tetrahedron centred at the origin."""
    s = edge / (2.0 * math.sqrt(2.0))
    vertices = s * np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    tets = orient_tets(vertices, np.array([[0, 1, 2, 3]]))
    return build_tet_mesh(vertices, tets, normalize=normalize, name="tet")


def cube_five_tets(size: float = 1.0, normalize: bool = False) -> TetMesh:
    """Axis-aligned cube [0, size]^3 split into one central and four corner tets."""
    vertices = size * np.array(
        [[(v >> 0) & 1, (v >> 1) & 1, (v >> 2) & 1] for v in range(8)], dtype=float,
    )
    tets = np.array([[1, 2, 4, 7], [0, 1, 2, 4], [3, 1, 2, 7], [5, 1, 4, 7], [6, 2, 4, 7]])
    return build_tet_mesh(vertices, orient_tets(vertices, tets), normalize=normalize, name="cube")


def box_mesh(
    size: Tuple[float, float, float] = (1.0, 1.0, 1.0),
    cells: Tuple[int, int, int] = (2, 2, 2),
    normalize: bool = False,
) -> TetMesh:
    """Structured box [0, sx] x [0, sy] x [0, sz]."""
    step = np.asarray(size, dtype=float) / np.asarray(cells, dtype=float)
    vertices, tets = grid_tets(cells, lambda g: g * step)
    return build_tet_mesh(vertices, tets, normalize=normalize, name="box")


def l_block(cells_per_unit: int = 2, normalize: bool = False) -> TetMesh:
    """L-shaped block: [0,2]x[0,2]x[0,1] minus [1,2]x[1,2]x[0,1]."""
    n = cells_per_unit
    vertices, tets = grid_tets(
        (2 * n, 2 * n, n), lambda g: g / n, keep_cell=lambda i, j, k: not (i >= n and j >= n),
    )
    return build_tet_mesh(vertices, tets, normalize=normalize, name="lblock")


def u_block(normalize: bool = False) -> TetMesh:
    """U-shaped block with two unit-thick arms joined by a base, [0,5]x[0,4]x[0,1]."""
    vertices, tets = grid_tets(
        (5, 4, 1), lambda g: g, keep_cell=lambda i, j, k: j == 0 or i == 0 or i == 4,
    )
    return build_tet_mesh(vertices, tets, normalize=normalize, name="ublock")


def _square_to_disk(u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Concentric square-to-disk map; square rings go to circles at even angles."""
    r = np.where(np.abs(u) > np.abs(v), u, v)
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = np.where(
            np.abs(u) > np.abs(v),
            (math.pi / 4.0) * v / np.where(u == 0, 1.0, u),
            math.pi / 2.0 - (math.pi / 4.0) * u / np.where(v == 0, 1.0, v),
        )
    phi = np.where((u == 0) & (v == 0), 0.0, phi)
    return r * np.cos(phi), r * np.sin(phi)


def ball_mesh(radius: float = 1.0, cells: int = 6, normalize: bool = False) -> TetMesh:
    """Polyhedral ball: a cube grid pushed radially onto the sphere."""
    def position(g: np.ndarray) -> np.ndarray:
        x = 2.0 * g / cells - 1.0
        inf_norm = np.abs(x).max(axis=1)
        two_norm = np.linalg.norm(x, axis=1)
        factor = np.where(two_norm > 0, inf_norm / np.where(two_norm > 0, two_norm, 1.0), 0.0)
        return radius * x * factor[:, None]

    vertices, tets = grid_tets((cells, cells, cells), position)
    return build_tet_mesh(vertices, tets, normalize=normalize, name="ball")


def torus_mesh(
    major_radius: float = 2.0,
    minor_radius: float = 0.75,
    ring_cells: int = 24,
    section_cells: int = 4,
    normalize: bool = False,
) -> TetMesh:
    """Solid torus with a round cross-section, periodic around the ring."""
    def position(g: np.ndarray) -> np.ndarray:
        angle = 2.0 * math.pi * g[:, 0] / ring_cells
        u = 2.0 * g[:, 1] / section_cells - 1.0
        v = 2.0 * g[:, 2] / section_cells - 1.0
        a, b = _square_to_disk(u, v)
        rho = major_radius + minor_radius * a
        return np.stack([rho * np.cos(angle), rho * np.sin(angle), minor_radius * b], axis=1)

    vertices, tets = grid_tets((ring_cells, section_cells, section_cells), position, wrap_i=True)
    return build_tet_mesh(vertices, tets, normalize=normalize, name="torus")


def two_disjoint_tets(normalize: bool = False) -> TetMesh:
    """Two unit right tets far apart."""
    base = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
    vertices = np.vstack([base, base + np.array([5.0, 0.0, 0.0])])
    tets = orient_tets(vertices, np.array([[0, 1, 2, 3], [4, 5, 6, 7]]))
    return build_tet_mesh(vertices, tets, normalize=normalize, name="two_tets")


SHAPES = {
    "tet": regular_tet,
    "cube": cube_five_tets,
    "box": box_mesh,
    "lblock": l_block,
    "ublock": u_block,
    "ball": ball_mesh,
    "torus": torus_mesh,
}


def generate(shape: str, normalize: bool = False) -> TetMesh:
    """Build one of the named fixture solids with default parameters."""
    if shape not in SHAPES:
        raise ValueError(f"Unknown shape '{shape}'. Available shapes: {sorted(SHAPES)}")
    mesh = SHAPES[shape](normalize=normalize)
    logger.info(f"Generated '{shape}' with {mesh.n_tets} tets")
    return mesh
