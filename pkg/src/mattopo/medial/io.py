"""Text formats for medial meshes, triangle meshes and polylines."""

import logging
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..models.medial_mesh import MedialMesh, TriangleMesh
from ..models.sphere import SphereKind


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

Transform = Callable[[np.ndarray], np.ndarray]


def _fmt(x: float) -> str:
    return f"{float(x):.10g}"


def format_ma(medial: MedialMesh, to_world: Optional[Transform] = None, scale: float = 1.0) -> str:
    """``#v #e #f`` header, then ``v x y z r``, ``e i j`` and ``f i j k`` lines, 0-based."""
    index = {sphere_id: k for k, sphere_id in enumerate(medial.vertices)}
    lines = [f"{len(medial.vertices)} {len(medial.edges)} {len(medial.faces)}"]
    for sphere_id in medial.vertices:
        sphere = medial.spheres[sphere_id]
        center = to_world(sphere.center) if to_world is not None else sphere.center
        lines.append("v " + " ".join(_fmt(x) for x in center) + f" {_fmt(sphere.radius / scale)}")
    lines.extend(f"e {index[a]} {index[b]}" for a, b in medial.edges)
    lines.extend(f"f {index[a]} {index[b]} {index[c]}" for a, b, c in medial.faces)
    return "\n".join(lines) + "\n"


def write_ma(medial: MedialMesh, path: PathLike, to_world: Optional[Transform] = None, scale: float = 1.0) -> None:
    Path(path).write_text(format_ma(medial, to_world, scale))


def read_ma(path: PathLike) -> Tuple[np.ndarray, np.ndarray, List[Tuple[int, int]], List[Tuple[int, int, int]]]:
    """Centers, radii, edges and faces of a ``.ma`` file."""
    rows = [line.split() for line in Path(path).read_text().splitlines() if line.strip() and not line.startswith("#")]
    if not rows:
        raise ValueError(f"Empty medial mesh file: {path}")
    n_v, n_e, n_f = (int(x) for x in rows[0][:3])
    centers, radii, edges, faces = [], [], [], []
    for row in rows[1:]:
        tag = row[0]
        if tag == "v":
            centers.append([float(x) for x in row[1:4]])
            radii.append(float(row[4]))
        elif tag == "e":
            edges.append((int(row[1]), int(row[2])))
        elif tag == "f":
            faces.append((int(row[1]), int(row[2]), int(row[3])))
        else:
            raise ValueError(f"Unknown record '{tag}' in {path}")
    if (len(centers), len(edges), len(faces)) != (n_v, n_e, n_f):
        raise ValueError(f"Header counts {n_v} {n_e} {n_f} do not match the records in {path}")
    return np.array(centers).reshape(-1, 3), np.array(radii), edges, faces


def write_obj(mesh: TriangleMesh, path: PathLike, to_world: Optional[Transform] = None) -> None:
    vertices = to_world(mesh.vertices) if to_world is not None else mesh.vertices
    lines = [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in vertices]
    lines.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces)
    Path(path).write_text("\n".join(lines) + "\n")


def write_polylines_obj(segments: Sequence[Tuple[np.ndarray, np.ndarray]], path: PathLike,
                        to_world: Optional[Transform] = None) -> None:
    """Line segments as OBJ ``l`` records."""
    lines = []
    for k, (a, b) in enumerate(segments):
        for point in (a, b):
            point = to_world(point) if to_world is not None else point
            lines.append("v " + " ".join(_fmt(x) for x in np.asarray(point).reshape(3)))
        lines.append(f"l {2 * k + 1} {2 * k + 2}")
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def feature_curves(medial: MedialMesh) -> Tuple[List[Tuple[np.ndarray, np.ndarray]], List[Tuple[np.ndarray, np.ndarray]]]:
    """External curves (between feature spheres) and internal ones (between seam spheres)."""
    external, internal = [], []
    for a, b in medial.edges:
        sa, sb = medial.spheres[a], medial.spheres[b]
        if sa.kind.is_feature and sb.kind.is_feature:
            external.append((sa.center, sb.center))
        elif sa.kind is SphereKind.TN and sb.kind is SphereKind.TN:
            internal.append((sa.center, sb.center))
    return external, internal
