"""Tetrahedral mesh readers and writers."""

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Type, Union

import numpy as np

from ..errors import MeshLoadError
from ..models.config import MeshFormat
from ..models.tet_mesh import TetMesh
from .builder import build_tet_mesh


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class MeshReader(ABC):
    """Parses one file format into raw vertex and tet arrays."""

    FORMAT: MeshFormat
    SUFFIXES: Tuple[str, ...] = ()

    @abstractmethod
    def parse(self, text: str) -> Tuple[np.ndarray, np.ndarray]:
        """Return (vertices, tets) with 0-based tet indices."""

    def read(self, path: PathLike) -> Tuple[np.ndarray, np.ndarray]:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Mesh file not found: {path}")
        try:
            return self.parse(path.read_text(encoding="utf-8"))
        except MeshLoadError:
            raise
        except (ValueError, IndexError) as e:
            raise MeshLoadError(f"Failed to parse {path}: {e}") from e


def _data_lines(text: str) -> List[List[str]]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line.split())
    return lines


class MeditReader(MeshReader):
    """MEDIT ``.mesh``: keyword sections, 1-based indices, trailing reference ids."""

    FORMAT = MeshFormat.MESH
    SUFFIXES = (".mesh",)

    def parse(self, text: str) -> Tuple[np.ndarray, np.ndarray]:
        tokens = [tok for line in _data_lines(text) for tok in line]
        vertices: Optional[np.ndarray] = None
        tets: Optional[np.ndarray] = None
        pos = 0
        while pos < len(tokens):
            keyword = tokens[pos]
            pos += 1
            if keyword == "Vertices":
                count = int(tokens[pos])
                pos += 1
                block = np.array(tokens[pos:pos + 4 * count], dtype=float).reshape(count, 4)
                vertices = block[:, :3]
                pos += 4 * count
            elif keyword == "Tetrahedra":
                count = int(tokens[pos])
                pos += 1
                block = np.array(tokens[pos:pos + 5 * count], dtype=np.int64).reshape(count, 5)
                tets = block[:, :4] - 1
                pos += 5 * count
            elif keyword in ("Triangles", "Edges", "Corners", "Ridges", "RequiredVertices"):
                count = int(tokens[pos])
                pos += 1
                width = {"Triangles": 4, "Edges": 3}.get(keyword, 1)
                pos += width * count
            elif keyword == "Dimension":
                if tokens[pos] != "3":
                    raise MeshLoadError(f"Only 3D meshes are supported, got dimension {tokens[pos]}")
                pos += 1
            elif keyword == "MeshVersionFormatted":
                pos += 1
            elif keyword == "End":
                break
        if vertices is None or tets is None:
            raise MeshLoadError("MEDIT file needs both Vertices and Tetrahedra sections")
        return vertices, tets


class TetReader(MeshReader):
    """Plain ``.tet``: counts header, ``x y z`` lines, then 0-based ``i j k l`` lines.

    The header is either ``nv nt`` on one line or ``nv vertices`` / ``nt tets``
    on two lines.
    """

    FORMAT = MeshFormat.TET
    SUFFIXES = (".tet",)

    def parse(self, text: str) -> Tuple[np.ndarray, np.ndarray]:
        lines = _data_lines(text)
        if not lines:
            raise MeshLoadError("Empty .tet file")
        if len(lines[0]) >= 2 and lines[0][1].lower().startswith("vert"):
            n_vertices = int(lines[0][0])
            n_tets = int(lines[1][0])
            body = lines[2:]
        else:
            n_vertices, n_tets = int(lines[0][0]), int(lines[0][1])
            body = lines[1:]
        if len(body) < n_vertices + n_tets:
            raise MeshLoadError(f"Expected {n_vertices} vertices and {n_tets} tets, file is truncated")
        vertices = np.array([row[:3] for row in body[:n_vertices]], dtype=float)
        tet_rows = body[n_vertices:n_vertices + n_tets]
        # some writers prefix each tet with its vertex count
        tets = np.array([row[-4:] for row in tet_rows], dtype=np.int64)
        return vertices, tets


class MeshReaderFactory:
    """Registry of mesh readers keyed by format."""

    def __init__(self):
        self.logger = logging.getLogger("mesh_reader_factory")
        self._readers: Dict[MeshFormat, Type[MeshReader]] = {}

    def register_reader(self, reader_class: Type[MeshReader]) -> None:
        self.logger.debug(f"Registering reader {reader_class.__name__} for '{reader_class.FORMAT.value}'")
        self._readers[reader_class.FORMAT] = reader_class

    def get_registered_formats(self) -> List[str]:
        return [fmt.value for fmt in self._readers]

    def detect_format(self, path: PathLike) -> MeshFormat:
        suffix = Path(path).suffix.lower()
        for fmt, reader_class in self._readers.items():
            if suffix in reader_class.SUFFIXES:
                return fmt
        raise MeshLoadError(
            f"Cannot infer mesh format from suffix '{suffix}'. "
            f"Available formats: {self.get_registered_formats()}"
        )

    def create_reader(self, fmt: Union[MeshFormat, str]) -> MeshReader:
        fmt = MeshFormat(fmt) if isinstance(fmt, str) else fmt
        if fmt not in self._readers:
            raise MeshLoadError(f"Unknown mesh format '{fmt.value}'. Available formats: {self.get_registered_formats()}")
        return self._readers[fmt]()


_factory: Optional[MeshReaderFactory] = None


def get_reader_factory() -> MeshReaderFactory:
    """Global reader factory with the built-in formats registered."""
    global _factory
    if _factory is None:
        _factory = MeshReaderFactory()
        _factory.register_reader(MeditReader)
        _factory.register_reader(TetReader)
    return _factory


def load_tet_mesh(path: PathLike, fmt: Optional[Union[MeshFormat, str]] = None, normalize: bool = True) -> TetMesh:
    """Read, validate and normalize a tet mesh file."""
    factory = get_reader_factory()
    fmt = factory.detect_format(path) if fmt is None else fmt
    reader = factory.create_reader(fmt)
    vertices, tets = reader.read(path)
    logger.info(f"Read {len(vertices)} vertices and {len(tets)} tets from {path}")
    return build_tet_mesh(vertices, tets, normalize=normalize, name=Path(path).stem)


def read_feature_file(path: PathLike, n_vertices: int) -> Tuple[List[Tuple[int, int]], List[int]]:
    """Parse a ``.fea`` sidecar: ``e i j`` sharp edges and ``c i`` corners, 0-based."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Feature file not found: {path}")
    edges: List[Tuple[int, int]] = []
    corners: List[int] = []
    for row in _data_lines(path.read_text(encoding="utf-8")):
        tag = row[0].lower()
        if tag == "e" and len(row) >= 3:
            i, j = int(row[1]), int(row[2])
            edges.append((min(i, j), max(i, j)))
        elif tag == "c" and len(row) >= 2:
            corners.append(int(row[1]))
        else:
            raise MeshLoadError(f"Malformed feature line in {path}: {' '.join(row)}")
    for index in [v for e in edges for v in e] + corners:
        if not 0 <= index < n_vertices:
            raise MeshLoadError(f"Feature file {path} references vertex {index} out of range")
    return sorted(set(edges)), sorted(set(corners))


def write_tet_mesh(mesh: TetMesh, path: PathLike, world: bool = True) -> None:
    """Write ``mesh`` in the plain ``.tet`` format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    points = mesh.to_world(mesh.vertices) if world else mesh.vertices
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{mesh.n_vertices} {mesh.n_tets}\n")
        for x, y, z in points:
            f.write(f"{x:.17g} {y:.17g} {z:.17g}\n")
        for a, b, c, d in mesh.tets:
            f.write(f"{a} {b} {c} {d}\n")
    logger.info(f"Wrote {mesh.n_tets} tets to {path}")
