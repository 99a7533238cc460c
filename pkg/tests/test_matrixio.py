"""Matrix file format: round trips and parse diagnostics."""

import numpy as np
import pytest

from rank1cross.matrixio import MatrixParseError, read_matrix, write_matrix


class TestRoundTrip:
    def test_real_exact(self, tmp_path):
        rng = np.random.default_rng(1)
        A = rng.standard_normal((7, 5)) * 10.0 ** rng.integers(-8, 8, size=(7, 5))
        path = tmp_path / "a.mat"
        write_matrix(path, A)
        np.testing.assert_array_equal(read_matrix(path), A)

    def test_complex_exact(self, tmp_path):
        rng = np.random.default_rng(2)
        A = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
        path = tmp_path / "c.mat"
        write_matrix(path, A)
        np.testing.assert_array_equal(read_matrix(path), A)

    def test_header(self, tmp_path):
        path = tmp_path / "h.mat"
        write_matrix(path, np.zeros((2, 3)))
        assert path.read_text().splitlines()[0] == "2 3 real"


class TestParsing:
    def test_simple_real(self, tmp_path):
        path = tmp_path / "m.mat"
        path.write_text("2 2 real\n1 2\n3 4\n")
        np.testing.assert_array_equal(read_matrix(path), np.array([[1.0, 2.0], [3.0, 4.0]]))

    def test_complex_tokens(self, tmp_path):
        path = tmp_path / "m.mat"
        path.write_text("1 2 complex\n1.5+2.5i -3e-05-1i\n")
        np.testing.assert_array_equal(read_matrix(path), np.array([[1.5 + 2.5j, -3e-05 - 1j]]))

    def test_bad_header(self, tmp_path):
        path = tmp_path / "m.mat"
        path.write_text("2 2\n1 2\n3 4\n")
        with pytest.raises(MatrixParseError, match="header"):
            read_matrix(path)

    def test_bad_entry_has_line_and_column(self, tmp_path):
        path = tmp_path / "m.mat"
        path.write_text("2 2 real\n1 2\n3 oops\n")
        with pytest.raises(MatrixParseError) as exc_info:
            read_matrix(path)
        assert exc_info.value.line == 3
        assert exc_info.value.column == 2
        assert "oops" in str(exc_info.value)

    def test_wrong_row_length(self, tmp_path):
        path = tmp_path / "m.mat"
        path.write_text("2 3 real\n1 2 3\n4 5\n")
        with pytest.raises(MatrixParseError, match="expected 3 entries"):
            read_matrix(path)

    def test_wrong_row_count(self, tmp_path):
        path = tmp_path / "m.mat"
        path.write_text("3 2 real\n1 2\n3 4\n")
        with pytest.raises(MatrixParseError, match="expected 3 rows"):
            read_matrix(path)

    def test_complex_entry_in_real_matrix(self, tmp_path):
        path = tmp_path / "m.mat"
        path.write_text("1 1 real\n1+2i\n")
        with pytest.raises(MatrixParseError, match="complex entry"):
            read_matrix(path)
