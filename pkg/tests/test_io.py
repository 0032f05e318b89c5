import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hltlab.errors import ConfigError
from hltlab.fields import generate_field, make_grid
from hltlab.io import read_field, read_matrix, sidecar_path, write_field, write_matrix
from hltlab.operators import DenseHermitian, pauli_square


@pytest.fixture
def grid():
    return make_grid(4, 3.0)


class TestFieldFiles:
    @pytest.mark.parametrize("kind", ["V", "A", "psi"])
    def test_round_trip(self, tmp_path, grid, kind):
        f = generate_field(2, kind, grid)
        write_field(tmp_path / "f.bin", f)
        g = read_field(tmp_path / "f.bin")
        assert type(g) is type(f) and g.grid == grid
        assert np.array_equal(g.data, f.data)

    def test_sidecar_contents(self, tmp_path, grid):
        write_field(tmp_path / "a.bin", generate_field(0, "A", grid))
        meta = json.loads(sidecar_path(tmp_path / "a.bin").read_text())
        assert meta == {"n": 4, "box": 3.0, "offset": True, "components": 3, "dtype": "float64"}

    def test_component_fastest(self, tmp_path, grid):
        A = generate_field(0, "A", grid)
        write_field(tmp_path / "a.bin", A)
        raw = np.frombuffer((tmp_path / "a.bin").read_bytes(), dtype="<f8")
        assert_allclose(raw[:3], A.data[:, 0, 0, 0])

    def test_missing_sidecar(self, tmp_path, grid):
        write_field(tmp_path / "v.bin", generate_field(0, "V", grid))
        sidecar_path(tmp_path / "v.bin").unlink()
        with pytest.raises(ConfigError):
            read_field(tmp_path / "v.bin")

    def test_incomplete_sidecar(self, tmp_path, grid):
        write_field(tmp_path / "v.bin", generate_field(0, "V", grid))
        sidecar_path(tmp_path / "v.bin").write_text('{"n": 4}')
        with pytest.raises(ConfigError):
            read_field(tmp_path / "v.bin")

    def test_truncated_data(self, tmp_path, grid):
        write_field(tmp_path / "v.bin", generate_field(0, "V", grid))
        data = (tmp_path / "v.bin").read_bytes()
        (tmp_path / "v.bin").write_bytes(data[:-8])
        with pytest.raises(ConfigError):
            read_field(tmp_path / "v.bin")


class TestMatrixFiles:
    def test_round_trip(self, tmp_path, grid):
        H = pauli_square(grid, generate_field(0, "A", grid))
        write_matrix(tmp_path / "h.mat", H, kind="pauli")
        G, header = read_matrix(tmp_path / "h.mat")
        assert np.array_equal(G.data, H.data)
        assert G.basis == "spinor" and G.grid == grid
        assert header["kind"] == "pauli"

    def test_without_grid(self, tmp_path):
        write_matrix(tmp_path / "d.mat", DenseHermitian(np.diag([3.0, -1.0])))
        G, _ = read_matrix(tmp_path / "d.mat")
        assert G.grid is None
        assert_allclose(G.data, np.diag([3, -1]))

    def test_size_mismatch(self, tmp_path):
        write_matrix(tmp_path / "d.mat", DenseHermitian(np.eye(2)))
        raw = (tmp_path / "d.mat").read_bytes()
        (tmp_path / "d.mat").write_bytes(raw[:-16])
        with pytest.raises(ConfigError):
            read_matrix(tmp_path / "d.mat")
