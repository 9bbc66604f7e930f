"""Global topology reference values of the input mesh."""

from fractions import Fraction

import numpy as np

from ..models.tet_mesh import TetMesh


def mesh_euler(mesh: TetMesh) -> int:
    """V - E + F - C over the full tet complex."""
    n_vertices = len(np.unique(mesh.tets))
    return n_vertices - len(mesh.edges) + len(mesh.faces) - mesh.n_tets


def surface_euler(mesh: TetMesh) -> int:
    """V - E + F of the boundary surface."""
    n_vertices = len(mesh.surface_vertices)
    return n_vertices - len(mesh.surface_edge_triangles) + len(mesh.surface_tris)


def solid_euler_from_surface(mesh: TetMesh) -> Fraction:
    """Euler characteristic of the solid implied by its closed orientable boundary."""
    return Fraction(surface_euler(mesh), 2)
