"""Tests for the restricted power diagram."""

import json
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import pytest

from mattopo.models.config import RpdConfig
from mattopo.rpd import (
    compute_rpd,
    compute_rpd_partial,
    compute_sphere_neighbors,
    export_rpd,
    new_rpd_state,
    radical_plane,
    validate_euler,
    validate_neighbors,
)
from mattopo.mesh import mesh_euler
from mattopo.models.sphere import SphereKind
from mattopo.rpd.engine import separating_shift
from mattopo.spheres import SphereRegistry
from mattopo.spheres.power import power_distances


def _registry(spheres):
    registry = SphereRegistry()
    registry.add_all(spheres)
    registry.take_new()
    return registry


class TestRadicalPlane:
    """Test cases for radical planes."""

    def test_equal_radii_bisector(self, sphere):
        """Test that equal spheres split at the midpoint."""
        plane = radical_plane(sphere([0.25, 0.5, 0.5], 0.2, 0), sphere([0.75, 0.5, 0.5], 0.2, 1))
        assert plane.signed_distance(np.array([0.5, 0.0, 0.0])) == pytest.approx(0.0)
        assert plane.signed_distance(np.array([0.0, 0.0, 0.0])) > 0
        assert plane.ref == 1

    def test_larger_sphere_pushes_plane(self, sphere):
        """Test that the plane moves away from the larger sphere."""
        plane = radical_plane(sphere([0.0, 0.0, 0.0], 0.5, 0), sphere([1.0, 0.0, 0.0], 0.1, 1))
        assert plane.signed_distance(np.array([0.5, 0.0, 0.0])) > 0

    def test_coincident_centers(self, sphere):
        """Test that coincident centers have no radical plane."""
        with pytest.raises(ValueError, match="coincident"):
            radical_plane(sphere([0, 0, 0], 0.5, 0), sphere([0, 0, 0], 0.2, 1))


class TestComputeRpd:
    """Test cases for full RPD computation on the cube."""

    def test_single_sphere(self, cube_mesh, sphere):
        """Test that one sphere owns the whole cube."""
        registry = _registry([sphere([0.5, 0.5, 0.5], 0.5)])
        state = compute_rpd(cube_mesh, registry.active())
        assert state.rpc_volume(0) == pytest.approx(1.0)
        assert state.elements[0].rpc_euler == Fraction(1)
        assert state.elements[0].rpc_cc == 1
        assert state.global_euler() == 1

    def test_two_sphere_split(self, cube_mesh, sphere):
        """Test that two equal spheres split the cube into halves."""
        registry = _registry([sphere([0.25, 0.5, 0.5], 0.25), sphere([0.75, 0.5, 0.5], 0.25)])
        state = compute_rpd(cube_mesh, registry.active())
        assert state.rpc_volume(0) == pytest.approx(0.5)
        assert state.rpc_volume(1) == pytest.approx(0.5)
        for sphere_id, other in ((0, 1), (1, 0)):
            elements = state.elements[sphere_id]
            assert elements.rpc_euler == Fraction(1)
            assert elements.rpf[other].euler == Fraction(1)
            assert elements.rpf[other].cc == 1
        assert state.global_euler() == 1
        assert validate_euler(state)

    def test_volumes_partition_tets(self, cube_mesh, sphere):
        """Test that cells inside every tet sum to the tet volume."""
        registry = _registry([
            sphere([0.3, 0.3, 0.3], 0.3), sphere([0.7, 0.7, 0.3], 0.2), sphere([0.5, 0.4, 0.8], 0.2),
        ])
        state = compute_rpd(cube_mesh, registry.active())
        assert np.allclose(state.tet_volume_sums(), cube_mesh.tet_volumes)

    def test_owner_at(self, cube_mesh, sphere):
        """Test point ownership after a split."""
        registry = _registry([sphere([0.25, 0.5, 0.5], 0.25), sphere([0.75, 0.5, 0.5], 0.25)])
        state = compute_rpd(cube_mesh, registry.active())
        assert state.owner_at(np.array([0.1, 0.5, 0.5])) == 0
        assert state.owner_at(np.array([0.9, 0.5, 0.5])) == 1
        assert state.owner_at(np.array([2.0, 0.5, 0.5])) is None

    def test_threaded_matches_serial(self, box, sphere):
        """Test that a thread pool gives the same cells."""
        spheres = [sphere([0.25, 0.25, 0.5], 0.25), sphere([0.75, 0.5, 0.5], 0.25), sphere([0.4, 0.8, 0.5], 0.2)]
        serial = compute_rpd(box, _registry(spheres).active())
        spheres = [sphere([0.25, 0.25, 0.5], 0.25), sphere([0.75, 0.5, 0.5], 0.25), sphere([0.4, 0.8, 0.5], 0.2)]
        with ThreadPoolExecutor(max_workers=3) as executor:
            threaded = compute_rpd(box, _registry(spheres).active(), RpdConfig(threads=3), executor=executor)
        for sphere_id in serial.sphere_ids():
            assert threaded.rpc_volume(sphere_id) == pytest.approx(serial.rpc_volume(sphere_id))


class TestPlanesThroughVertices:
    """Test cases for radical planes that pass through mesh vertices."""

    def test_separating_shift(self):
        """Test that both sides of a pair move the plane to the same place."""
        eps = 1e-6
        distances = np.array([0.0, 1.0, -1.0, 5e-6])
        shift = separating_shift(distances, True, eps)
        assert shift > 0
        assert np.all(np.abs(distances + shift) > 10 * eps)
        assert separating_shift(-distances, False, eps) == -shift

    def test_no_shift_when_clear(self):
        """Test that planes away from every vertex are kept as they are."""
        assert separating_shift(np.array([0.5, -0.5]), True, 1e-6) == 0.0
        assert separating_shift(np.array([0.5, -0.5]), False, 1e-6) == 0.0

    def test_split_on_grid_faces(self, slab, sphere):
        """Test that a split along interior mesh faces still has one shared face."""
        registry = _registry([sphere([1.0, 2.0, 0.5], 0.5), sphere([3.0, 2.0, 0.5], 0.5)])
        state = compute_rpd(slab, registry.active())
        for sphere_id, other in ((0, 1), (1, 0)):
            elements = state.elements[sphere_id]
            assert elements.rpc_cc == 1
            assert elements.rpc_euler == Fraction(1)
            assert elements.rpf[other].cc == 1
            assert elements.rpf[other].euler == Fraction(1)
            assert elements.rpf[other].measure == pytest.approx(4.0, rel=1e-3)
        assert state.rpc_volume(0) == pytest.approx(8.0, rel=1e-3)
        assert np.allclose(state.tet_volume_sums(), slab.tet_volumes)
        assert state.global_euler() == 1


class TestPartialUpdate:
    """Test cases for incremental updates."""

    def test_insertion(self, cube_mesh, sphere):
        """Test that an insertion re-clips and matches a full recomputation."""
        registry = _registry([sphere([0.25, 0.5, 0.5], 0.25), sphere([0.75, 0.5, 0.5], 0.25)])
        state = compute_rpd(cube_mesh, registry.active())
        registry.add(sphere([0.5, 0.5, 0.9], 0.1))
        compute_rpd_partial(state, registry.active(), registry.take_new())
        assert state.n_rounds == 2
        assert 2 in state.dirty
        full = compute_rpd(cube_mesh, registry.active())
        for sphere_id in registry.active_ids():
            assert state.rpc_volume(sphere_id) == pytest.approx(full.rpc_volume(sphere_id))

    def test_deletion(self, cube_mesh, sphere):
        """Test that deleting a sphere returns its volume to the others."""
        registry = _registry([sphere([0.25, 0.5, 0.5], 0.25), sphere([0.75, 0.5, 0.5], 0.25)])
        state = compute_rpd(cube_mesh, registry.active())
        registry.delete(1)
        compute_rpd_partial(state, registry.active(), [])
        assert 1 not in state.cells
        assert state.rpc_volume(0) == pytest.approx(1.0)

    def test_no_changes(self, cube_mesh, sphere):
        """Test that an unchanged sphere set is a no-op."""
        registry = _registry([sphere([0.5, 0.5, 0.5], 0.5)])
        state = compute_rpd(cube_mesh, registry.active())
        compute_rpd_partial(state, registry.active(), [])
        assert state.n_rounds == 1

    def test_empty_state(self, cube_mesh):
        """Test that a fresh state has no spheres."""
        state = new_rpd_state(cube_mesh)
        assert state.sphere_ids() == []
        assert state.eps > 0


    def test_random_insertions_match_full(self, torus, scatter):
        """Test that twenty single insertions end where a full recomputation does."""
        rng = np.random.default_rng(20)
        registry = _registry(scatter(torus, 3, rng))
        state = compute_rpd(torus, registry.active())
        expected = mesh_euler(torus)
        for new in scatter(torus, 20, rng):
            registry.add(new)
            compute_rpd_partial(state, registry.active(), registry.take_new())
            assert state.global_euler() == expected
        assert state.n_rounds == 21
        full = compute_rpd(torus, registry.active())
        assert state.sphere_ids() == full.sphere_ids()
        for sphere_id in full.sphere_ids():
            assert state.rpc_volume(sphere_id) == pytest.approx(full.rpc_volume(sphere_id), rel=1e-12, abs=1e-15)
            assert state.elements[sphere_id].rpc_euler == full.elements[sphere_id].rpc_euler


class TestNeighbors:
    """Test cases for sphere adjacency."""

    def test_symmetric(self, sphere):
        """Test that adjacency is symmetric."""
        rng = np.random.default_rng(11)
        spheres = [sphere(rng.random(3), 0.05 + 0.1 * rng.random(), i) for i in range(12)]
        neighbors = compute_sphere_neighbors(spheres)
        for i, adjacent in neighbors.items():
            assert i not in adjacent
            for j in adjacent:
                assert i in neighbors[j]

    def test_pair(self, sphere):
        """Test that two spheres are always neighbors."""
        neighbors = compute_sphere_neighbors([sphere([0, 0, 0], 0.1, 0), sphere([5, 0, 0], 0.1, 1)])
        assert neighbors == {0: {1}, 1: {0}}

    def test_hidden_sphere(self, cube_mesh, sphere):
        """Test that a power-dominated sphere stays attached but owns no volume."""
        offsets = 0.25 * np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
        registry = _registry([sphere(0.5 + o, 0.6) for o in offsets] + [sphere([0.5, 0.5, 0.5], 0.05)])
        neighbors = compute_sphere_neighbors(registry.active())
        assert neighbors[4] == {0, 1, 2, 3}
        for i, adjacent in neighbors.items():
            for j in adjacent:
                assert i in neighbors[j]
        assert validate_neighbors(registry.active())[4] == set()
        state = compute_rpd(cube_mesh, registry.active())
        assert state.empty_spheres() == [4]
        assert np.allclose(state.tet_volume_sums(), cube_mesh.tet_volumes)
        assert state.global_euler() == 1

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_linear_programs(self, sphere, seed):
        """Test hull adjacency against one linear program per pair on random equal spheres."""
        rng = np.random.default_rng(100 + seed)
        radius = float(rng.uniform(0.01, 0.1))
        spheres = [sphere(rng.random(3), radius, i) for i in range(int(rng.integers(5, 16)))]
        assert compute_sphere_neighbors(spheres) == validate_neighbors(spheres)


class TestVoronoiDegeneration:
    """Test cases for spheres of equal radius."""

    @pytest.mark.parametrize("fixture", ["cube_mesh", "ball"])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_equal_radii_match_voronoi(self, request, scatter, sphere, fixture, seed):
        """Test that equal radii give the same cells as the plain restricted Voronoi diagram."""
        mesh = request.getfixturevalue(fixture)
        rng = np.random.default_rng(seed)
        weighted = scatter(mesh, int(rng.integers(2, 21)), rng, radius=0.05 * mesh.bbox_diag)
        points = [sphere(s.center, 0.0, kind=SphereKind.CORNER) for s in weighted]
        power = compute_rpd(mesh, _registry(weighted).active())
        voronoi = compute_rpd(mesh, _registry(points).active())
        assert power.sphere_ids() == voronoi.sphere_ids()
        for sphere_id in power.sphere_ids():
            assert power.rpc_volume(sphere_id) == pytest.approx(
                voronoi.rpc_volume(sphere_id), rel=1e-9, abs=1e-12 * mesh.volume,
            )


class TestPowerMembership:
    """Test cases for point ownership against the power distance."""

    def test_power_nearest_owns_point(self, torus, scatter, interior):
        """Test that random interior points lie in the cell of their power-nearest sphere."""
        rng = np.random.default_rng(5)
        state = compute_rpd(torus, _registry(scatter(torus, 20, rng)).active())
        ids = np.array(state.sphere_ids())
        centers = np.array([state.spheres[i].center for i in ids])
        radii = np.array([state.spheres[i].radius for i in ids])
        points, tets = interior(torus, 100_000, rng)

        table = power_distances(centers, radii, points)
        nearest = np.argsort(table, axis=1)[:, :2]
        best = np.take_along_axis(table, nearest, axis=1)
        # points close to a radical plane are ties
        keep = best[:, 1] - best[:, 0] > 1e-6 * torus.bbox_diag ** 2
        assert np.count_nonzero(keep) >= 0.99 * len(points)

        owners = ids[nearest[:, 0]]
        keys = owners[keep] * torus.n_tets + tets[keep]
        kept = points[keep]
        hits = 0
        for key in np.unique(keys):
            cell = state.cell(int(key // torus.n_tets), int(key % torus.n_tets))
            if cell is None:
                continue
            group = kept[keys == key]
            inside = np.ones(len(group), dtype=bool)
            for plane in cell.planes:
                inside &= plane.signed_distance(group) >= -state.eps
            hits += int(np.count_nonzero(inside))
        assert hits >= 0.999 * len(kept)


class TestExport:
    """Test cases for debug export."""

    def test_export_rpd(self, tmp_path, cube_mesh, sphere):
        """Test that every sphere gets an OBJ and a summary entry."""
        registry = _registry([sphere([0.25, 0.5, 0.5], 0.25), sphere([0.75, 0.5, 0.5], 0.25)])
        state = compute_rpd(cube_mesh, registry.active())
        summary_path = export_rpd(state, tmp_path / "rpd")
        assert (tmp_path / "rpd" / "sphere_0.obj").exists()
        assert (tmp_path / "rpd" / "sphere_1.obj").exists()
        summary = json.loads(summary_path.read_text())
        assert summary["0"]["volume"] == pytest.approx(0.5)
