"""Pytest configuration and fixtures."""

from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pytest

from mattopo.mesh import detect_features
from mattopo.mesh.generators import (
    ball_mesh,
    box_mesh,
    cube_five_tets,
    l_block,
    regular_tet,
    torus_mesh,
    two_disjoint_tets,
)
from mattopo.models.config import PipelineConfig
from mattopo.models.sphere import MedialSphere, SphereKind
from mattopo.models.tet_mesh import TetMesh


def make_sphere(center, radius: float, sphere_id: int = -1, kind: SphereKind = SphereKind.T2) -> MedialSphere:
    """Build a sphere with the tangency count its kind requires."""
    n_tangent = 3 if kind is SphereKind.TN else (0 if kind.is_feature else 2)
    return MedialSphere(id=sphere_id, center=np.asarray(center, dtype=float), radius=radius, kind=kind,
                        n_tangent=n_tangent)


def interior_points(mesh: TetMesh, n: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform random points inside the mesh and the tet holding each."""
    volumes = np.abs(mesh.tet_volumes)
    tets = rng.choice(mesh.n_tets, size=n, p=volumes / volumes.sum())
    bary = rng.dirichlet(np.ones(4), size=n)
    points = np.einsum("nk,nki->ni", bary, mesh.vertices[mesh.tets[tets]])
    return points, tets


def random_spheres(mesh: TetMesh, n: int, rng: np.random.Generator, radius: Optional[float] = None) -> List[MedialSphere]:
    """Spheres centered at random interior points, with random radii unless ``radius`` is given."""
    centers, _ = interior_points(mesh, n, rng)
    if radius is None:
        radii = mesh.bbox_diag * rng.uniform(0.01, 0.1, size=n)
    else:
        radii = np.full(n, radius)
    return [make_sphere(c, float(r)) for c, r in zip(centers, radii)]


@pytest.fixture
def sphere():
    """Factory for test spheres."""
    return make_sphere


@pytest.fixture
def scatter():
    """Factory for random sphere sets inside a mesh."""
    return random_spheres


@pytest.fixture
def interior():
    """Factory for uniform random points inside a mesh."""
    return interior_points


@pytest.fixture
def cube_mesh() -> TetMesh:
    """Unit cube of five tets with its sharp edges detected."""
    return detect_features(cube_five_tets())


@pytest.fixture
def tet_mesh() -> TetMesh:
    """Single regular tet with its sharp edges detected."""
    return detect_features(regular_tet())


@pytest.fixture
def box() -> TetMesh:
    """Unit box on a 2x2x2 grid."""
    return detect_features(box_mesh())


@pytest.fixture
def slab() -> TetMesh:
    """Thin 4 x 4 x 1 box, a single medial sheet in its middle."""
    return detect_features(box_mesh(size=(4.0, 4.0, 1.0), cells=(4, 4, 1)))


@pytest.fixture
def lblock() -> TetMesh:
    """L-shaped block with one concave sharp edge."""
    return detect_features(l_block())


@pytest.fixture
def torus() -> TetMesh:
    """Coarse solid torus; smooth, so no sharp edges."""
    return detect_features(torus_mesh(ring_cells=16, section_cells=2), angle_threshold_deg=60.0)


@pytest.fixture
def ball() -> TetMesh:
    """Coarse polyhedral ball."""
    return detect_features(ball_mesh(cells=4), angle_threshold_deg=60.0)


@pytest.fixture
def disjoint_tets() -> TetMesh:
    """Two separate tets."""
    return detect_features(two_disjoint_tets())


@pytest.fixture
def sample_config_dict() -> Dict[str, Any]:
    """Create a sample configuration dictionary for testing."""
    return {
        "mesh": {"input_path": "model.tet", "angle_threshold_deg": 40.0},
        "spheres": {"n_init": 10, "init_strategy": "random"},
        "rpd": {"threads": 2},
        "topology": {"pin_strategy": "farthest"},
        "features": {"sheet_angle_deg": 25.0},
        "geometry": {"delta_eps": 1.5, "target_samples": 500},
        "output": {"out_dir": "results", "export_rpd": True},
        "seed": 7,
        "max_rounds": 20,
        "log_level": "DEBUG",
    }


@pytest.fixture
def fast_config() -> PipelineConfig:
    """Small configuration for end-to-end runs on fixture meshes."""
    config = PipelineConfig.from_dict({
        "spheres": {"n_init": 4},
        "geometry": {"delta_eps": 5.0, "target_samples": 300, "max_insert_per_round": 16},
        "output": {"reconstruction_resolution": 24, "hausdorff_samples": 500},
        "max_rounds": 8,
        "seed": 3,
    })
    return config
