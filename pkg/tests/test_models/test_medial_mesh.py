"""Tests for medial mesh, triangle mesh and metrics models."""

import numpy as np
import pytest

from mattopo.models.medial_mesh import MedialMesh, MetricsReport, TriangleMesh


def _spheres(sphere, n):
    return {i: sphere([float(i), 0.0, 0.0], 0.5, i) for i in range(n)}


class TestMedialMesh:
    """Test cases for the medial mesh complex."""

    def test_canonical_simplices(self, sphere):
        """Test that simplices are sorted and deduplicated."""
        medial = MedialMesh(
            spheres=_spheres(sphere, 3), vertices=[2, 0, 1], edges=[(1, 0), (0, 1), (2, 1)], faces=[(2, 0, 1)],
        )
        assert medial.vertices == [0, 1, 2]
        assert medial.edges == [(0, 1), (1, 2)]
        assert medial.faces == [(0, 1, 2)]

    def test_degenerate_simplex(self, sphere):
        """Test that repeated ids in a simplex are rejected."""
        with pytest.raises(ValueError, match="Degenerate simplex"):
            MedialMesh(spheres=_spheres(sphere, 2), vertices=[0, 1], edges=[(1, 1)])

    def test_triangle_euler(self, sphere):
        """Test V - E + F of a closed triangle."""
        medial = MedialMesh(
            spheres=_spheres(sphere, 3), vertices=[0, 1, 2], edges=[(0, 1), (1, 2), (0, 2)], faces=[(0, 1, 2)],
        )
        assert medial.is_closed()
        assert medial.euler == 1

    def test_restore_closure(self, sphere):
        """Test that missing edges and faces of a tet are added."""
        medial = MedialMesh(spheres=_spheres(sphere, 4), vertices=[0, 1, 2, 3], tets=[(0, 1, 2, 3)])
        assert not medial.is_closed()
        medial.restore_closure()
        assert medial.is_closed()
        assert len(medial.edges) == 6
        assert len(medial.faces) == 4
        assert medial.euler == 1

    def test_neighbors(self, sphere):
        """Test vertex adjacency."""
        medial = MedialMesh(spheres=_spheres(sphere, 3), vertices=[0, 1, 2], edges=[(0, 1), (0, 2)])
        assert medial.neighbors(0) == [1, 2]
        assert medial.neighbors(1) == [0]


class TestTriangleMesh:
    """Test cases for triangle meshes."""

    def test_tetrahedron_surface(self):
        """Test a closed tetrahedral surface."""
        vertices = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
        faces = np.array([[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]])
        mesh = TriangleMesh(vertices, faces)
        assert mesh.n_faces == 4
        assert mesh.is_watertight()
        assert mesh.euler == 2
        assert mesh.areas[0] == pytest.approx(0.5)

    def test_open_surface(self):
        """Test that a single triangle is not watertight."""
        mesh = TriangleMesh(np.eye(3), np.array([[0, 1, 2]]))
        assert not mesh.is_watertight()

    def test_index_out_of_range(self):
        """Test face index validation."""
        with pytest.raises(ValueError, match="out of range"):
            TriangleMesh(np.eye(3), np.array([[0, 1, 3]]))


class TestMetricsReport:
    """Test cases for metrics."""

    def test_eps_max_derived(self):
        """Test that eps_max is the larger one-sided error."""
        report = MetricsReport(eps1=0.2, eps2=0.5, euler=1, n_spheres=10)
        assert report.eps_max == 0.5
        assert report.to_dict()["eps_max"] == 0.5

    def test_eps_max_mismatch(self):
        """Test that an inconsistent eps_max is rejected."""
        with pytest.raises(ValueError, match="eps_max"):
            MetricsReport(eps1=0.2, eps2=0.5, euler=1, n_spheres=10, eps_max=0.3)

    def test_negative_error(self):
        """Test that negative errors are rejected."""
        with pytest.raises(ValueError, match="negative"):
            MetricsReport(eps1=-0.1, eps2=0.5, euler=1, n_spheres=10)

    def test_unmeasured(self):
        """Test that missing errors stay None instead of reading as zero."""
        report = MetricsReport(eps1=None, eps2=None, euler=1, n_spheres=3)
        assert report.eps_max is None
        assert report.to_dict()["eps1"] is None

    def test_half_measured(self):
        """Test that one measured side without the other is rejected."""
        with pytest.raises(ValueError, match="both"):
            MetricsReport(eps1=0.2, eps2=None, euler=1, n_spheres=3)
