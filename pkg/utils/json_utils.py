"""
JSON schemas shared by the CLI and fixtures.

Matrices are {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major
order. Floats are written with Python's shortest round-trip repr, so equal
inputs always produce byte-identical files.
"""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import numpy as np
from numpy.typing import ArrayLike

from utils.boundary_utils import BoundaryCondition
from utils.errors import SchemaError
from utils.greens_utils import GridFunction
from utils.matrix_utils import BeamParams
from utils.nystrom_utils import NystromEigenvalue
from utils.spectral_utils import SpectralPoint


def complex_to_pair(value: complex) -> List[float]:
    value = complex(value)
    return [float(value.real), float(value.imag)]


def pair_to_complex(pair: Any) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise SchemaError(f"expected [re, im], got {pair!r}")
    try:
        return complex(float(pair[0]), float(pair[1]))
    except (TypeError, ValueError):
        raise SchemaError(f"non-numeric complex pair {pair!r}")


def vector_to_json(values: Iterable[complex]) -> List[List[float]]:
    return [complex_to_pair(v) for v in values]


def matrix_to_json(A: ArrayLike) -> Dict[str, Any]:
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    return {"rows": int(A.shape[0]), "cols": int(A.shape[1]), "data": vector_to_json(A.ravel())}


def matrix_from_json(data: Dict[str, Any]) -> np.ndarray:
    """Parse the matrix schema.

    Raises:
        SchemaError: On missing keys, wrong sizes or non-finite entries.
    """
    try:
        rows, cols, entries = int(data["rows"]), int(data["cols"]), data["data"]
    except (KeyError, TypeError, ValueError):
        raise SchemaError("matrix JSON needs integer 'rows', 'cols' and a 'data' list")
    if rows < 1 or cols < 1 or len(entries) != rows * cols:
        raise SchemaError(f"matrix JSON has {len(entries)} entries for shape {rows}x{cols}")
    A = np.array([pair_to_complex(pair) for pair in entries]).reshape(rows, cols)
    if not np.all(np.isfinite(A)):
        raise SchemaError("matrix JSON has non-finite entries")
    return A


def params_to_json(params: BeamParams) -> Dict[str, float]:
    return params.to_dict()


def params_from_json(data: Dict[str, Any]) -> BeamParams:
    try:
        return BeamParams.from_dict(data)
    except (KeyError, TypeError):
        raise SchemaError("params JSON needs 'l', 'alpha' and 'k'")


def bc_to_json(bc: BoundaryCondition) -> Dict[str, Any]:
    result: Dict[str, Any] = {"M": matrix_to_json(bc.M)}
    if bc.name is not None:
        result["name"] = bc.name
    return result


def bc_from_json(data: Dict[str, Any]) -> BoundaryCondition:
    if not isinstance(data, dict) or "M" not in data:
        raise SchemaError("boundary condition JSON needs an 'M' matrix")
    M = matrix_from_json(data["M"])
    if M.shape != (4, 8):
        raise SchemaError(f"boundary matrix must be 4x8, got {M.shape[0]}x{M.shape[1]}")
    return BoundaryCondition(M, data.get("name"))


def grid_function_to_json(u: GridFunction) -> Dict[str, Any]:
    return {
        "nodes": [float(x) for x in u.rule.nodes],
        "weights": [float(w) for w in u.rule.weights],
        "values": vector_to_json(u.values),
    }


def spectral_point_to_json(point: SpectralPoint) -> Dict[str, Any]:
    return {
        "lambda": complex_to_pair(point.lam),
        "k_lambda": complex_to_pair(point.k_lambda),
        "residual": float(point.residual),
        "multiplicity": int(point.multiplicity),
        "on_spec_q": bool(point.on_spec_q),
        "c": vector_to_json(point.c),
    }


def nystrom_eigenvalue_to_json(eigenvalue: NystromEigenvalue, k: float) -> Dict[str, Any]:
    return {
        "lambda": complex_to_pair(eigenvalue.value),
        "k_lambda": complex_to_pair(eigenvalue.value * k),
        "residual": float(eigenvalue.residual),
        "convergence_delta": float(eigenvalue.convergence_delta),
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)


def load_json(path: Union[str, Path]) -> Any:
    """Read a JSON file; malformed content is a SchemaError."""
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as error:
        raise SchemaError(f"{path}: invalid JSON ({error})")


def write_json(obj: Any, path: Optional[Union[str, Path]] = None) -> str:
    text = dumps(obj)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
