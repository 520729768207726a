import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from utils.boundary_utils import named_bc
from utils.errors import InvalidParams, SchemaError
from utils.greens_utils import GridFunction, beam_rule
from utils.json_utils import (
    bc_from_json,
    bc_to_json,
    dumps,
    grid_function_to_json,
    load_json,
    matrix_from_json,
    matrix_to_json,
    pair_to_complex,
    params_from_json,
    spectral_point_to_json,
    write_json,
)
from utils.spectral_utils import SpectralPoint


class TestMatrixSchema:
    def test_layout(self):
        data = matrix_to_json(np.array([[1.0, 2.0j], [3.0, 4.0 - 1.0j]]))
        assert data == {"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, -1.0]]}

    def test_floats_survive_text(self, rng):
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        restored = matrix_from_json(json.loads(dumps(matrix_to_json(A))))
        assert np.array_equal(restored, A)

    def test_deterministic_text(self, rng):
        A = rng.standard_normal((4, 8))
        assert dumps(matrix_to_json(A)) == dumps(matrix_to_json(A.copy()))

    @pytest.mark.parametrize("data", [
        {"rows": 2, "cols": 2, "data": [[1, 0]]},
        {"rows": 1, "data": [[1, 0]]},
        {"rows": 1, "cols": 1, "data": [["a", 0]]},
        {"rows": 1, "cols": 1, "data": [[1, 0, 0]]},
    ])
    def test_malformed(self, data):
        with pytest.raises(SchemaError):
            matrix_from_json(data)

    def test_real_scalars_accepted(self):
        assert pair_to_complex(2.5) == 2.5 + 0j

    def test_nan_is_not_written(self):
        with pytest.raises(ValueError):
            dumps(matrix_to_json(np.array([[np.nan]])))


class TestDomainSchemas:
    def test_bc_round_trip(self, params):
        bc = named_bc("Q", params)
        restored = bc_from_json(json.loads(dumps(bc_to_json(bc))))
        assert restored.name == "Q"
        assert np.array_equal(restored.M, bc.M)

    def test_bc_shape(self):
        with pytest.raises(SchemaError):
            bc_from_json({"M": matrix_to_json(np.eye(4))})

    def test_bc_needs_matrix(self):
        with pytest.raises(SchemaError):
            bc_from_json({"name": "clamped"})

    def test_params(self):
        assert params_from_json({"l": 2, "alpha": 1, "k": 0.5}).intrinsic_length == 4.0
        with pytest.raises(SchemaError):
            params_from_json({"l": 1})
        with pytest.raises(InvalidParams):
            params_from_json({"l": 1, "alpha": -1, "k": 1})

    def test_grid_function(self, params):
        rule = beam_rule(params, 10)
        data = grid_function_to_json(GridFunction(np.ones(rule.size), rule))
        assert len(data["nodes"]) == len(data["weights"]) == len(data["values"]) == 10
        assert_allclose(sum(data["weights"]), 2 * params.l)

    def test_spectral_point(self):
        point = SpectralPoint(0.5 + 0j, np.array([1, 0, 0, 0], dtype=complex), 1e-12, 0.5 + 0j)
        data = spectral_point_to_json(point)
        assert data["lambda"] == [0.5, 0.0]
        assert data["multiplicity"] == 1
        assert len(data["c"]) == 4


class TestFiles:
    def test_write_then_load(self, tmp_path, params):
        path = tmp_path / "bc.json"
        write_json(bc_to_json(named_bc("hinged", params)), path)
        assert bc_from_json(load_json(path)).name == "hinged"

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(SchemaError):
            load_json(path)
