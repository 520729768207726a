"""
Tilde blocks and Green's blocks of the infinite-beam condition Q.
"""
import numpy as np
import pandas as pd

from checks import append_rows, identity_rows
from utils.boundary_utils import greens_matrices, named_bc, tilde
from utils.matrix_utils import BeamParams, build_constants, max_abs


def check(df: pd.DataFrame, params: BeamParams) -> pd.DataFrame:
    c = build_constants()
    decomposition = tilde(named_bc("Q", params), params)
    left = np.linalg.solve(decomposition.tilde, decomposition.tilde_minus)
    right = np.linalg.solve(decomposition.tilde, decomposition.tilde_plus)
    z = params.alpha * params.l
    expected = 4 * params.alpha ** 3 * c.Uhat @ np.diag(np.exp(c.eps * c.omega * z))
    rep = greens_matrices(named_bc("Q", params), params)
    pairs = [
        ("Q-tilde-closed-form", max_abs(decomposition.tilde - expected) / max_abs(expected)),
        ("Q-left-projector", max_abs(left - c.D0110)),
        ("Q-right-projector", max_abs(right - c.D1001)),
        ("Q-green-blocks", max(max_abs(rep.g_minus - c.GQ_minus), max_abs(rep.g_plus - c.GQ_plus))),
    ]
    return append_rows(df, identity_rows(pairs))
