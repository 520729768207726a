"""
Kernel of Q against the infinite-beam closed form, continuity and reality.
"""
import numpy as np
import pandas as pd

from checks import append_rows
from utils.boundary_utils import greens_matrices, named_bc, random_wellposed
from utils.greens_utils import closed_form_kernel, kernel_matrix
from utils.matrix_utils import BeamParams, y_vector


def check(df: pd.DataFrame, params: BeamParams) -> pd.DataFrame:
    grid = np.linspace(-params.l, params.l, 50)
    Q = named_bc("Q", params)
    computed = kernel_matrix(Q, params, grid, grid)
    exact = closed_form_kernel(params, grid[:, None], grid[None, :])

    rng = np.random.default_rng(7)
    scale = params.alpha / (4 * params.k)
    continuity, reality = 0.0, 0.0
    for _ in range(5):
        bc = random_wellposed(rng, params, real=True)
        rep = greens_matrices(bc, params)
        y = y_vector(params, rng.uniform(-params.l, params.l, 5))
        upper = scale * np.einsum("ic,cd,id->i", y, rep.g_plus, y)
        lower = -scale * np.einsum("ic,cd,id->i", y, rep.g_minus, y)
        continuity = max(continuity, float(np.max(np.abs(upper - lower))) / max(1.0, float(np.max(np.abs(upper)))))
        values = kernel_matrix(bc, params, grid[::5], grid[::5], rep)
        reality = max(reality, float(np.max(np.abs(values.imag))) / max(1.0, float(np.max(np.abs(values)))))
    rows = [
        ("Q-kernel-closed-form", float(np.max(np.abs(computed - exact))), 1e-12),
        ("kernel-diagonal-continuity", continuity, 1e-10),
        ("real-condition-real-kernel", reality, 1e-10),
    ]
    return append_rows(df, rows)
