"""
Closure of pi-bar(4) and its isomorphism with real 4 x 4 matrices.
"""
import numpy as np
import pandas as pd

from checks import append_rows
from utils.matrix_utils import BeamParams, max_abs, pibar_to_real, random_pibar, real_to_pibar, reversal


def _defect(A):
    R = reversal(A.shape[0])
    return max_abs(R @ A.conj() @ R - A) / max(1.0, max_abs(A))


def check(df: pd.DataFrame, params: BeamParams) -> pd.DataFrame:
    rng = np.random.default_rng(41)
    closure, determinant, round_trip = 0.0, 0.0, 0.0
    for _ in range(20):
        A, B = random_pibar(rng), random_pibar(rng)
        closure = max(closure, _defect(A @ B), _defect(np.linalg.inv(A)), _defect(A.T), _defect(A + 2.5 * B))
        det = np.linalg.det(A)
        determinant = max(determinant, abs(det.imag) / abs(det))
        real = rng.standard_normal((4, 4))
        round_trip = max(round_trip, max_abs(pibar_to_real(real_to_pibar(real)) - real))
    rows = [
        ("pibar-closure", closure, 1e-10),
        ("pibar-real-determinant", determinant, 1e-10),
        ("pibar-real-round-trip", round_trip, 1e-12),
    ]
    return append_rows(df, rows)
