"""
K_M[w] solves the beam equation and satisfies the boundary condition.
"""
import numpy as np
import pandas as pd

from checks import append_rows
from utils.boundary_utils import named_bc, random_wellposed
from utils.greens_utils import GridFunction, beam_rule, boundary_trace, de_residual
from utils.matrix_utils import BeamParams


def check(df: pd.DataFrame, params: BeamParams) -> pd.DataFrame:
    rng = np.random.default_rng(3)
    rule = beam_rule(params, 200)
    w = GridFunction(np.cos(np.pi * rule.nodes / params.l) + 0.3 * rule.nodes ** 2, rule)
    conditions = [named_bc("Q", params), named_bc("clamped", params),
                  random_wellposed(rng, params, real=True), random_wellposed(rng, params, real=True)]
    residual, trace = 0.0, 0.0
    for bc in conditions:
        residual = max(residual, de_residual(bc, params, w))
        trace = max(trace, float(np.max(np.abs(bc.M @ boundary_trace(bc, params, w)))))
    rows = [
        ("beam-equation-residual", residual, 1e-6),
        ("boundary-condition-residual", trace, 1e-9),
    ]
    return append_rows(df, rows)
