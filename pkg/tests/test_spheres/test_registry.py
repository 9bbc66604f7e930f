"""Tests for the sphere registry, .sph files and power distances."""

import numpy as np
import pytest

from mattopo.models.sphere import SphereKind
from mattopo.spheres import (
    SphereRegistry,
    power_distance,
    power_distances,
    power_nearest,
    read_sph,
    write_sph,
)


class TestSphereRegistry:
    """Test cases for SphereRegistry."""

    def test_sequential_ids(self, sphere):
        """Test that ids are assigned in insertion order."""
        registry = SphereRegistry()
        added = registry.add_all([sphere([0, 0, 0], 1.0, 99), sphere([5, 0, 0], 1.0, 42)])
        assert [s.id for s in added] == [0, 1]
        assert len(registry) == 2

    def test_duplicate_rejected(self, sphere):
        """Test that a center within dup_eps of an active sphere is skipped."""
        registry = SphereRegistry(dup_eps=0.1)
        registry.add(sphere([0, 0, 0], 1.0))
        assert registry.add(sphere([0.05, 0, 0], 1.0)) is None
        assert registry.add(sphere([0.5, 0, 0], 1.0)) is not None
        assert len(registry) == 2

    def test_duplicates_within_batch(self, sphere):
        """Test that a batch is deduplicated against itself."""
        registry = SphereRegistry(dup_eps=0.1)
        added = registry.add_all([sphere([0, 0, 0], 1.0), sphere([0, 0, 0.01], 1.0)])
        assert len(added) == 1

    def test_take_new(self, sphere):
        """Test that new ids are reported once."""
        registry = SphereRegistry()
        registry.add_all([sphere([0, 0, 0], 1.0), sphere([1, 0, 0], 1.0)])
        assert registry.take_new() == {0, 1}
        assert not registry[0].is_new
        assert registry.take_new() == set()

    def test_delete_keeps_ids(self, sphere):
        """Test that deletion leaves a tombstone and ids are not reused."""
        registry = SphereRegistry(dup_eps=0.1)
        registry.add_all([sphere([0, 0, 0], 1.0), sphere([1, 0, 0], 1.0)])
        registry.delete(0)
        assert registry.active_ids() == [1]
        assert registry.n_total == 2
        # a deleted sphere no longer blocks its position
        again = registry.add(sphere([0, 0, 0], 1.0))
        assert again.id == 2

    def test_counts_by_kind(self, sphere):
        """Test counting active spheres per kind."""
        registry = SphereRegistry()
        registry.add(sphere([0, 0, 0], 0.0, kind=SphereKind.CORNER))
        registry.add(sphere([1, 0, 0], 0.5))
        counts = registry.counts_by_kind()
        assert counts["corner"] == 1
        assert counts["T2"] == 1
        assert counts["TN"] == 0


class TestSphFile:
    """Test cases for .sph files."""

    def test_write_format(self, tmp_path, sphere):
        """Test the 'id x y z r kind' line layout in world units."""
        path = tmp_path / "out.sph"
        write_sph([sphere([10, 20, 30], 5.0, 0)], path, scale=10.0, offset=[1, 1, 1])
        tokens = path.read_text().split()
        assert tokens[0] == "0"
        assert [float(t) for t in tokens[1:5]] == pytest.approx([2.0, 3.0, 4.0, 0.5])
        assert tokens[5] == "T2"

    def test_read_back(self, tmp_path, sphere):
        """Test reading kinds and radii back."""
        path = tmp_path / "out.sph"
        write_sph([sphere([0, 0, 0], 1.5, 0), sphere([1, 1, 1], 2.0, 1, SphereKind.TN)], path)
        spheres = read_sph(path)
        assert [s.kind for s in spheres] == [SphereKind.T2, SphereKind.TN]
        assert spheres[1].radius == pytest.approx(2.0)

    def test_malformed(self, tmp_path):
        """Test that short lines are rejected."""
        path = tmp_path / "bad.sph"
        path.write_text("0 1 2 3\n")
        with pytest.raises(ValueError, match="expected"):
            read_sph(path)


class TestPowerDistance:
    """Test cases for power distances."""

    def test_single(self, sphere):
        """Test |p - c|^2 - r^2."""
        assert power_distance(sphere([0, 0, 0], 1.0), np.array([2.0, 0.0, 0.0])) == pytest.approx(3.0)

    def test_batch_matches_single(self, sphere):
        """Test that the batched form agrees with the scalar one."""
        spheres = [sphere([0, 0, 0], 1.0), sphere([3, 0, 0], 2.0)]
        points = np.array([[1.0, 0.0, 0.0], [2.5, 1.0, 0.0]])
        table = power_distances(np.array([s.center for s in spheres]), np.array([s.radius for s in spheres]), points)
        assert table.shape == (2, 2)
        for i, p in enumerate(points):
            for j, s in enumerate(spheres):
                assert table[i, j] == pytest.approx(power_distance(s, p))

    def test_larger_sphere_wins(self, sphere):
        """Test that the midpoint goes to the sphere with the larger weight."""
        spheres = [sphere([0, 0, 0], 0.5), sphere([2, 0, 0], 1.0)]
        assert power_nearest(spheres, np.array([[1.0, 0.0, 0.0]])).tolist() == [1]
