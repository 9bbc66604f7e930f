"""Tests for mesh readers, writers and feature files."""

import pytest

from mattopo.errors import MeshLoadError
from mattopo.mesh import get_reader_factory, load_tet_mesh, read_feature_file, write_tet_mesh
from mattopo.mesh.generators import cube_five_tets
from mattopo.mesh.readers import MeditReader, TetReader
from mattopo.models.config import MeshFormat

MEDIT_TET = """MeshVersionFormatted 1
Dimension 3
Vertices
4
0 0 0 1
1 0 0 1
0 1 0 1
0 0 1 1
Tetrahedra
1
1 2 3 4 0
End
"""


class TestReaders:
    """Test cases for the reader factory and parsers."""

    def test_registered_formats(self):
        """Test that both built-in formats are registered."""
        assert set(get_reader_factory().get_registered_formats()) == {"mesh", "tet"}

    def test_detect_format(self):
        """Test suffix detection."""
        factory = get_reader_factory()
        assert factory.detect_format("model.mesh") is MeshFormat.MESH
        assert factory.detect_format("model.TET") is MeshFormat.TET

    def test_unknown_suffix(self):
        """Test that unknown suffixes are rejected."""
        with pytest.raises(MeshLoadError, match="Cannot infer mesh format"):
            get_reader_factory().detect_format("model.stl")

    def test_parse_medit(self):
        """Test parsing a MEDIT file with 1-based indices."""
        vertices, tets = MeditReader().parse(MEDIT_TET)
        assert vertices.shape == (4, 3)
        assert tets.tolist() == [[0, 1, 2, 3]]

    def test_medit_missing_section(self):
        """Test that a file without tets is rejected."""
        with pytest.raises(MeshLoadError, match="Vertices and Tetrahedra"):
            MeditReader().parse("MeshVersionFormatted 1\nDimension 3\nEnd\n")

    def test_parse_tet_two_line_header(self):
        """Test the ``nv vertices`` / ``nt tets`` header variant."""
        text = "4 vertices\n1 tets\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n4 0 1 2 3\n"
        vertices, tets = TetReader().parse(text)
        assert len(vertices) == 4
        assert tets.tolist() == [[0, 1, 2, 3]]

    def test_truncated_tet_file(self):
        """Test that missing records are reported."""
        with pytest.raises(MeshLoadError, match="truncated"):
            TetReader().parse("4 1\n0 0 0\n1 0 0\n")

    def test_missing_file(self, tmp_path):
        """Test loading a non-existent mesh."""
        with pytest.raises(FileNotFoundError):
            load_tet_mesh(tmp_path / "absent.tet")

    def test_write_and_load(self, tmp_path):
        """Test that a written cube loads with the same topology."""
        path = tmp_path / "cube.tet"
        write_tet_mesh(cube_five_tets(), path)
        mesh = load_tet_mesh(path, normalize=False)
        assert mesh.n_tets == 5
        assert mesh.name == "cube"
        assert len(mesh.surface_tris) == 12

    def test_load_medit_file(self, tmp_path):
        """Test loading a MEDIT file by suffix with normalization."""
        path = tmp_path / "tet.mesh"
        path.write_text(MEDIT_TET)
        mesh = load_tet_mesh(path)
        assert mesh.n_tets == 1
        assert mesh.vertices.max() == pytest.approx(1000.0)


class TestFeatureFile:
    """Test cases for .fea sidecar files."""

    def test_read_feature_file(self, tmp_path):
        """Test parsing edges and corners."""
        path = tmp_path / "cube.fea"
        path.write_text("# sharp edges\ne 1 0\ne 0 2\nc 0\n")
        edges, corners = read_feature_file(path, 8)
        assert edges == [(0, 1), (0, 2)]
        assert corners == [0]

    def test_out_of_range(self, tmp_path):
        """Test that bad vertex ids are rejected."""
        path = tmp_path / "bad.fea"
        path.write_text("e 0 9\n")
        with pytest.raises(MeshLoadError, match="out of range"):
            read_feature_file(path, 8)

    def test_malformed_line(self, tmp_path):
        """Test that unknown records are rejected."""
        path = tmp_path / "bad.fea"
        path.write_text("x 1 2\n")
        with pytest.raises(MeshLoadError, match="Malformed"):
            read_feature_file(path, 8)
