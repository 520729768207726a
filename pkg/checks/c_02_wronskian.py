"""
Closed-form Wronskian inverse and the reflection identities.
"""
import numpy as np
import pandas as pd

from checks import append_rows, identity_rows
from utils.matrix_utils import BeamParams, build_constants, max_abs, wronskian_W, wronskian_W_inv, y_vector


def check(df: pd.DataFrame, params: BeamParams) -> pd.DataFrame:
    c = build_constants()
    xs = np.linspace(-params.l, params.l, 7)
    inverse_error = max(max_abs(wronskian_W(params, x) @ wronskian_W_inv(params, x) - np.eye(4)) for x in xs)
    conjugate_error = max(max_abs(wronskian_W(params, x) @ c.R4 - wronskian_W(params, x).conj()) for x in xs)
    reflection_error = max_abs(y_vector(params, xs) @ c.L2.T - y_vector(params, -xs))
    pairs = [
        ("wronskian-inverse", inverse_error),
        ("wronskian-reversal", conjugate_error),
        ("half-turn-reflects-y", reflection_error),
    ]
    return append_rows(df, identity_rows(pairs))
