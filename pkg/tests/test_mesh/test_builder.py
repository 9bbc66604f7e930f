"""Tests for tet mesh construction and validation."""

import numpy as np
import pytest

from mattopo.errors import MeshLoadError
from mattopo.mesh import build_tet_mesh, mesh_euler, renormalized, surface_euler
from mattopo.mesh.builder import NORMALIZED_EXTENT
from mattopo.mesh.generators import cube_five_tets, generate

UNIT_TET = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)


class TestBuildTetMesh:
    """Test cases for build_tet_mesh."""

    def test_single_tet(self):
        """Test building one positively oriented tet."""
        mesh = build_tet_mesh(UNIT_TET, [[0, 1, 2, 3]], normalize=False)
        assert mesh.n_tets == 1
        assert len(mesh.surface_tris) == 4
        assert mesh.volume == pytest.approx(1.0 / 6.0)

    def test_normalization(self):
        """Test rescaling into the normalized box and back."""
        mesh = build_tet_mesh(UNIT_TET * 3.0 + 5.0, [[0, 1, 2, 3]], normalize=True)
        assert mesh.vertices.max() == pytest.approx(NORMALIZED_EXTENT)
        assert mesh.vertices.min() == pytest.approx(0.0)
        assert np.allclose(mesh.to_world(mesh.vertices), UNIT_TET * 3.0 + 5.0)
        assert mesh.to_world_length(NORMALIZED_EXTENT) == pytest.approx(3.0)

    def test_renormalized(self):
        """Test rebuilding a raw mesh in normalized coordinates."""
        mesh = renormalized(cube_five_tets())
        assert mesh.bbox_diag == pytest.approx(NORMALIZED_EXTENT * np.sqrt(3.0))

    def test_inverted_tet(self):
        """Test that negatively oriented tets are reported with their index."""
        with pytest.raises(MeshLoadError, match="Inverted or flat tets: 0"):
            build_tet_mesh(UNIT_TET, [[0, 2, 1, 3]], normalize=False)

    def test_repeated_vertex(self):
        """Test that tets with a repeated vertex are rejected."""
        with pytest.raises(MeshLoadError, match="repeated vertices"):
            build_tet_mesh(UNIT_TET, [[0, 1, 1, 3]], normalize=False)

    def test_index_out_of_range(self):
        """Test that dangling indices are rejected."""
        with pytest.raises(MeshLoadError, match="out of range"):
            build_tet_mesh(UNIT_TET, [[0, 1, 2, 4]], normalize=False)

    def test_duplicated_tet(self):
        """Test that duplicated tets count as a non-manifold boundary."""
        with pytest.raises(MeshLoadError, match="non-manifold boundary"):
            build_tet_mesh(UNIT_TET, [[0, 1, 2, 3], [1, 0, 3, 2]], normalize=False)

    def test_non_manifold_edge(self):
        """Test that two tets sharing only an edge are rejected."""
        vertices = np.vstack([UNIT_TET, [[0, -1, 0], [0, 0, -1]]])
        tets = [[0, 1, 2, 3], [0, 1, 4, 5]]
        with pytest.raises(MeshLoadError, match="surface edge"):
            build_tet_mesh(vertices, tets, normalize=False)


class TestMeshTopology:
    """Test cases for Euler characteristics of fixture solids."""

    @pytest.mark.parametrize("shape,expected", [
        ("tet", 1), ("cube", 1), ("box", 1), ("lblock", 1), ("ublock", 1), ("ball", 1), ("torus", 0),
    ])
    def test_mesh_euler(self, shape, expected):
        """Test the Euler characteristic of each generated solid."""
        mesh = generate(shape)
        assert mesh_euler(mesh) == expected
        assert surface_euler(mesh) == 2 * expected

    def test_disjoint_tets(self, disjoint_tets):
        """Test that two components count twice."""
        assert mesh_euler(disjoint_tets) == 2

    def test_unknown_shape(self):
        """Test that unknown fixture names are rejected."""
        with pytest.raises(ValueError, match="Unknown shape"):
            generate("teapot")

    def test_cube_adjacency(self, cube_mesh):
        """Test face and edge tables of the five-tet cube."""
        assert cube_mesh.n_tets == 5
        assert len(cube_mesh.surface_tris) == 12
        assert int((cube_mesh.face_valence == 2).sum()) == 4
        assert cube_mesh.surface_area == pytest.approx(6.0)

    def test_contains(self, cube_mesh):
        """Test point location inside and outside the cube."""
        assert cube_mesh.contains(np.array([0.5, 0.5, 0.5]))
        assert not cube_mesh.contains(np.array([1.5, 0.5, 0.5]))
