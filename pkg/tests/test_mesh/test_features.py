"""Tests for sharp edge detection, polylines and surface sampling."""

import numpy as np
import pytest

from mattopo.errors import MeshLoadError
from mattopo.mesh import (
    apply_feature_annotations,
    convex_corners,
    detect_features,
    farthest_point_pins,
    feature_polylines,
    random_pins,
    sample_surface,
    segment_polylines,
)
from mattopo.mesh.generators import cube_five_tets
from mattopo.models.tet_mesh import FeatureKind, SampleKind


class TestFeatureDetection:
    """Test cases for sharp edges and corners."""

    def test_cube_features(self, cube_mesh):
        """Test that the 12 cube edges and 8 corners are found and face diagonals are not."""
        assert len(cube_mesh.feature_edges) == 12
        assert all(e.kind is FeatureKind.CONVEX for e in cube_mesh.feature_edges)
        assert len(cube_mesh.corners) == 8
        assert convex_corners(cube_mesh) == cube_mesh.corners

    def test_smooth_torus(self, torus):
        """Test that a coarse torus has no sharp edges at a wide threshold."""
        assert torus.feature_edges == []
        assert torus.corners == []

    def test_concave_edge(self, lblock):
        """Test that the inner edge of the L-block is concave."""
        concave = [e for e in lblock.feature_edges if e.kind is FeatureKind.CONCAVE]
        assert concave
        for edge in concave:
            a, b = lblock.vertices[edge.v0], lblock.vertices[edge.v1]
            assert np.allclose(a[:2], [1.0, 1.0])
            assert np.allclose(b[:2], [1.0, 1.0])

    def test_invalid_threshold(self, cube_mesh):
        """Test the threshold range."""
        with pytest.raises(ValueError, match="Angle threshold"):
            detect_features(cube_mesh, 0.0)

    def test_annotations(self):
        """Test supplying sharp edges from a file instead of detection."""
        mesh = apply_feature_annotations(cube_five_tets(), [(0, 1)], [])
        assert len(mesh.feature_edges) == 1
        # a lone sharp edge pins both of its endpoints
        assert mesh.corners == [0, 1]

    def test_annotation_must_be_surface_edge(self):
        """Test that interior edges are rejected."""
        mesh = cube_five_tets()
        with pytest.raises(MeshLoadError, match="not a surface edge"):
            apply_feature_annotations(mesh, [(1, 6)], [])


class TestPolylines:
    """Test cases for polylines and arc-length segments."""

    def test_cube_polylines(self, cube_mesh):
        """Test that every cube edge runs corner to corner."""
        polylines = feature_polylines(cube_mesh)
        assert len(polylines) == 12
        assert all(len(p.edges) == 1 and not p.closed for p in polylines)

    def test_segments(self, cube_mesh):
        """Test uniform splitting of unit edges."""
        segments = segment_polylines(cube_mesh, feature_polylines(cube_mesh), 0.3)
        assert len(segments) == 12 * 4
        lengths = [np.linalg.norm(s.end - s.start) for s in segments]
        assert np.allclose(lengths, 0.25)
        assert all(np.allclose(s.midpoint, 0.5 * (s.start + s.end)) for s in segments)

    def test_segment_kind_filter(self, lblock):
        """Test selecting concave polylines only."""
        segments = segment_polylines(lblock, feature_polylines(lblock), 0.5, kinds=(FeatureKind.CONCAVE,))
        assert segments
        assert all(s.kind is FeatureKind.CONCAVE for s in segments)

    def test_non_positive_length(self, cube_mesh):
        """Test that the segment length must be positive."""
        with pytest.raises(ValueError, match="segment_length"):
            segment_polylines(cube_mesh, feature_polylines(cube_mesh), 0.0)


class TestSampling:
    """Test cases for surface samples and pins."""

    def test_sample_kinds(self, cube_mesh):
        """Test that interior, edge and corner samples are produced."""
        samples = sample_surface(cube_mesh, density=200.0, seed=1)
        kinds = {s.kind for s in samples}
        assert kinds == {SampleKind.SURFACE, SampleKind.FEATURE_EDGE, SampleKind.CORNER}
        assert sum(1 for s in samples if s.kind is SampleKind.CORNER) == 8

    def test_samples_lie_on_surface(self, cube_mesh):
        """Test that every sample touches a cube face."""
        for s in sample_surface(cube_mesh, density=100.0, seed=2):
            p = s.position
            assert np.isclose(p, 0.0, atol=1e-9).any() or np.isclose(p, 1.0, atol=1e-9).any()

    def test_seeded_determinism(self, cube_mesh):
        """Test that the same seed gives the same samples."""
        a = sample_surface(cube_mesh, density=50.0, seed=5)
        b = sample_surface(cube_mesh, density=50.0, seed=5)
        assert len(a) == len(b)
        assert all(np.array_equal(x.position, y.position) for x, y in zip(a, b))

    def test_invalid_density(self, cube_mesh):
        """Test that the density must be positive."""
        with pytest.raises(ValueError, match="density"):
            sample_surface(cube_mesh, density=0.0)

    def test_farthest_point_pins(self, cube_mesh):
        """Test that pins are distinct interior samples."""
        samples = sample_surface(cube_mesh, density=200.0, seed=1)
        pins = farthest_point_pins(cube_mesh, samples, 6, np.random.default_rng(0))
        assert len(pins) == 6
        points = np.array([p.position for p in pins])
        assert len(np.unique(points.round(9), axis=0)) == 6
        assert all(p.kind is SampleKind.SURFACE for p in pins)

    def test_random_pins_capped(self, cube_mesh):
        """Test that more pins than candidates returns all candidates."""
        pins = random_pins(cube_mesh, [], 100, np.random.default_rng(0))
        assert len(pins) == 12
