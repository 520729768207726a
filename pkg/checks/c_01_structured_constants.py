"""
Identities of the fourth roots of -1 and the constant matrices.
"""
import numpy as np
import pandas as pd

from checks import append_rows, identity_rows
from utils.matrix_utils import BeamParams, build_constants, max_abs


def check(df: pd.DataFrame, params: BeamParams) -> pd.DataFrame:
    """
    Verify the structured constants.

    Args:
        df (pd.DataFrame): The report built so far
        params (BeamParams): Beam parameters (unused, constants are parameter-free)

    Returns:
        pd.DataFrame: Report with constant-matrix rows added
    """
    c = build_constants()
    I = np.eye(4)
    pairs = [
        ("omega-fourth-power", max_abs(c.omega ** 4 + 1)),
        ("omega-rotation", max_abs(np.roll(c.omega, -1) - 1j * c.omega)),
        ("Omega-fourth-power", max_abs(np.linalg.matrix_power(c.Omega, 4) + I)),
        ("W0-inverse", max_abs(c.W0 @ c.W0_inv - I)),
        ("reversal-conjugates-Omega", max_abs(c.R4 @ c.Omega - c.Omega.conj() @ c.R4)),
        ("reversal-conjugates-W0", max_abs(c.W0 @ c.R4 - c.W0.conj())),
        ("shift-rotates-Omega", max_abs(c.Lmat @ c.Omega @ c.L_inv - 1j * c.Omega)),
        ("half-turn-anticommutes", max_abs(c.L2 @ c.Omega + c.Omega @ c.L2)),
        ("U4-conjugate", max_abs(c.U4.conj() - c.U4 @ c.R4)),
        ("U4-unitary", max_abs(c.U4 @ c.U4.conj().T - I)),
        ("V-determinants", abs(np.linalg.det(c.V) - 1) + abs(np.linalg.det(c.Vhat) + 1)),
    ]
    return append_rows(df, identity_rows(pairs))
