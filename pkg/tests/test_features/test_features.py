"""Tests for external and internal feature preservation."""

import numpy as np
import pytest

from mattopo.features import (
    NormalCluster,
    check_internal_feature_pair,
    cluster_normals,
    clusters_match,
    concave_edge_spheres,
    convex_segments,
    feature_coverage,
    medial_edges,
    preserve_external_features,
    preserve_internal_features,
)
from mattopo.models.config import FeatureConfig
from mattopo.models.features import SheetStatus
from mattopo.models.sphere import SphereKind
from mattopo.models.topology import SurfaceFragment
from mattopo.rpd import compute_rpd
from mattopo.spheres import SphereRegistry

COARSE = FeatureConfig(segment_ratio=0.2)


def _fragment(normal, area, centroid=(0.0, 0.0, 0.0)):
    return SurfaceFragment(
        tet=0, face=0, triangle=0, area=area,
        centroid=np.asarray(centroid, dtype=float), normal=np.asarray(normal, dtype=float),
    )


def _cluster(normal):
    return NormalCluster(normal=np.asarray(normal, dtype=float) / np.linalg.norm(normal), point=np.zeros(3), area=1.0)


@pytest.fixture
def slab_state(slab, sphere):
    """Two spheres side by side in the slab."""
    registry = SphereRegistry()
    registry.add_all([sphere([1.0, 2.0, 0.5], 0.5), sphere([3.0, 2.0, 0.5], 0.5)])
    return compute_rpd(slab, registry.active())


class TestExternalFeatures:
    """Test cases for convex corners and sharp edges."""

    def test_cube_corners_and_edges(self, cube_mesh, sphere):
        """Test that every corner gets a sphere and every segment ends up covered."""
        center = sphere([0.5, 0.5, 0.5], 0.5, 0)
        new = preserve_external_features([center], cube_mesh, COARSE)
        corners = [s for s in new if s.kind is SphereKind.CORNER]
        assert len(corners) == 8
        assert all(s.radius == 0.0 for s in new)
        segments = convex_segments(cube_mesh, COARSE)
        for k, s in enumerate(new, start=1):
            s.id = k
        assert feature_coverage([center] + new, segments).complete

    def test_idempotent(self, cube_mesh, sphere):
        """Test that a second pass inserts nothing."""
        spheres = [sphere([0.5, 0.5, 0.5], 0.5, 0)]
        spheres += preserve_external_features(spheres, cube_mesh, COARSE)
        assert preserve_external_features(spheres, cube_mesh, COARSE) == []

    def test_smooth_meshes(self, torus, ball, sphere):
        """Test that meshes without sharp edges get no feature spheres."""
        for mesh in (torus, ball):
            center = mesh.vertices.mean(axis=0)
            assert preserve_external_features([sphere(center, 0.1)], mesh) == []

    def test_uncovered_without_spheres(self, cube_mesh):
        """Test that no spheres means nothing is covered."""
        segments = convex_segments(cube_mesh, COARSE)
        coverage = feature_coverage([], segments)
        assert len(coverage.uncovered) == len(segments)

    def test_segment_count(self, cube_mesh):
        """Test the segment length relative to the bbox diagonal."""
        segments = convex_segments(cube_mesh, COARSE)
        # 0.2 * sqrt(3) ~ 0.346, so each unit edge splits in 3
        assert len(segments) == 36

    def test_concave_spheres(self, lblock):
        """Test that concave segments get shrink spheres on both sides."""
        new = concave_edge_spheres(lblock, FeatureConfig(segment_ratio=0.2))
        assert len(new) == 4
        assert all(s.kind is SphereKind.T2 and s.radius > 0 for s in new)
        assert all(lblock.contains(s.center) for s in new)

    def test_no_concave_edges(self, cube_mesh):
        """Test that a convex solid has no concave seeds."""
        assert concave_edge_spheres(cube_mesh) == []


class TestNormalClusters:
    """Test cases for patch normal clustering."""

    def test_cluster_normals(self):
        """Test merging near-parallel normals and dropping slivers."""
        fragments = [
            _fragment([0, 0, 1], 1.0),
            _fragment([0, 0.1, 1], 1.0),
            _fragment([1, 0, 0], 1.5),
            _fragment([0, 1, 0], 0.01),
        ]
        clusters = cluster_normals(fragments, angle_deg=30.0, min_fraction=0.05)
        assert len(clusters) == 2
        assert clusters[0].area == pytest.approx(2.0)
        assert clusters[0].normal[2] > 0.99

    def test_all_slivers_kept(self):
        """Test that clusters are not all dropped."""
        clusters = cluster_normals([_fragment([0, 0, 1], 1.0)], min_fraction=2.0)
        assert len(clusters) == 1

    def test_clusters_match_permuted(self):
        """Test that cluster order does not matter."""
        a = [_cluster([0, 0, 1]), _cluster([1, 0, 0])]
        b = [_cluster([1, 0.05, 0]), _cluster([0, 0, 1])]
        assert clusters_match(a, b, 10.0)

    def test_clusters_mismatch(self):
        """Test unequal counts and far normals."""
        a = [_cluster([0, 0, 1]), _cluster([1, 0, 0])]
        assert not clusters_match(a, a[:1], 10.0)
        assert not clusters_match(a, [_cluster([0, 0, 1]), _cluster([-1, 0, 0])], 10.0)

    def test_greedy_fallback(self):
        """Test matching of many clusters without permutations."""
        normals = [[np.cos(t), np.sin(t), 0.0] for t in np.linspace(0, np.pi, 8)]
        a = [_cluster(n) for n in normals]
        assert clusters_match(a, list(reversed(a)), 1.0)


class TestInternalFeatures:
    """Test cases for the same-sheet test and seam spheres."""

    def test_self_pair(self, slab_state):
        """Test that a sphere is on its own sheet."""
        assert check_internal_feature_pair(slab_state, 0, 0) is SheetStatus.SAME_SHEET

    def test_medial_edges(self, slab_state):
        """Test that the shared face yields one medial edge."""
        assert medial_edges(slab_state) == [(0, 1)]

    def test_same_sheet_on_dominant_planes(self, slab_state):
        """Test that top and bottom alone match."""
        config = FeatureConfig(min_cluster_fraction=0.2)
        assert check_internal_feature_pair(slab_state, 0, 1, config) is SheetStatus.SAME_SHEET

    def test_cross_sheet_on_side_walls(self, slab_state):
        """Test that opposite end walls make the pair cross sheets."""
        assert check_internal_feature_pair(slab_state, 0, 1) is SheetStatus.CROSS_SHEET

    def test_seam_fix_persists(self, slab, slab_state):
        """Test that a fixed edge is not queued again."""
        statuses = {}
        rng = np.random.default_rng(0)
        new = preserve_internal_features(slab_state, slab, FeatureConfig(), rng, statuses, tan_eps=1e-3)
        assert len(new) == 1
        assert new[0].radius > 0
        assert slab.contains(new[0].center)
        assert statuses[(0, 1)] is SheetStatus.CROSS_SHEET_FIXED
        assert preserve_internal_features(slab_state, slab, FeatureConfig(), rng, statuses) == []

    def test_feature_endpoints_skipped(self, cube_mesh, sphere):
        """Test that edges touching feature spheres are not checked."""
        registry = SphereRegistry()
        registry.add_all([sphere([0.5, 0.5, 0.5], 0.4), sphere([0.0, 0.0, 0.0], 0.0, kind=SphereKind.CORNER)])
        state = compute_rpd(cube_mesh, registry.active())
        statuses = {}
        assert preserve_internal_features(state, cube_mesh, statuses=statuses) == []
        assert statuses == {}
