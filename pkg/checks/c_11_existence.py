"""
Prescribed eigenvalues: negative, inside the band and beyond 1/k.
"""
import numpy as np
import pandas as pd

from checks import append_rows
from utils.existence_utils import construct_bc_for_eigenvalue, eigenvalue_one_residual
from utils.matrix_utils import BeamParams
from utils.representation_utils import gamma
from utils.spectral_utils import Y_matrix


def check(df: pd.DataFrame, params: BeamParams) -> pd.DataFrame:
    rows = []
    for intrinsic in (-1.0, 2.0, 3.0):
        lam = intrinsic / params.k
        bc, point = construct_bc_for_eigenvalue(lam, params)
        G = gamma(bc, params)
        error = eigenvalue_one_residual(G, Y_matrix(lam, params.l, params))
        realness = 0.0 if bc.is_real else 1.0
        rows.append((f"prescribed-eigenvalue k*lambda={intrinsic:g}", max(error, realness), 1e-8))
        rows.append((f"prescribed-null-vector k*lambda={intrinsic:g}", point.residual, 1e-8))
    return append_rows(df, rows)
