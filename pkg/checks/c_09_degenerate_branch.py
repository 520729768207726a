"""
The lambda = 1/k branch: P(z) factorization and its determinant.
"""
import numpy as np
import pandas as pd
from scipy.linalg import block_diag

from checks import append_rows
from utils.matrix_utils import SQRT2, BeamParams, build_constants, is_pibar, max_abs
from utils.spectral_utils import p_blocks, p_matrix, p_matrix_explicit, singular_ratio, x_degenerate, x_direct


def check(df: pd.DataFrame, params: BeamParams) -> pd.DataFrame:
    c = build_constants()
    factorization, determinant, explicit, direct, pibar, condition = 0.0, 0.0, 0.0, 0.0, 0.0, 0.0
    for x in np.linspace(0.05, 5.0, 12):
        z = params.alpha * x
        P = p_matrix(z)
        p_plus, p_minus = p_blocks(z)
        explicit = max(explicit, max_abs(P - p_matrix_explicit(z)))
        factorization = max(factorization, max_abs(c.V @ P @ c.Vhat - SQRT2 * block_diag(p_plus, p_minus)))
        det_x = np.linalg.det(x_degenerate(x, params))
        expected = -np.exp(-2 * SQRT2 * z) / (4 ** 3 * params.alpha ** 6) \
            * np.linalg.det(p_plus) * np.linalg.det(p_minus)
        determinant = max(determinant, abs(det_x - expected) / abs(expected))
        direct = max(direct, max_abs(x_direct(1.0 / params.k, x, params) - x_degenerate(x, params)))
        for block in (p_blocks(-z)[0] @ np.linalg.inv(p_plus), p_blocks(-z)[1] @ np.linalg.inv(p_minus)):
            pibar = max(pibar, 0.0 if is_pibar(block, 1e-10) else 1.0)
        ratio = singular_ratio(x_degenerate(x, params))
        condition = max(condition, np.inf if ratio == 0 else 1.0 / ratio)
    rows = [
        ("P-row-form", explicit, 1e-10),
        ("P-block-factorization", factorization, 1e-10),
        ("degenerate-determinant", determinant, 1e-10),
        ("degenerate-closed-vs-direct", direct, 1e-10),
        ("P-block-ratios-pibar", pibar, 0.0),
        ("degenerate-X-conditioning", condition, 1e8),
    ]
    return append_rows(df, rows)
