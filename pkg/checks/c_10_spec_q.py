"""
Spec K_Q lies in (0, 1/k) and interlaces.
"""
import numpy as np
import pandas as pd

from checks import append_rows
from utils.matrix_utils import BeamParams
from utils.spectral_utils import spec_Q


def check(df: pd.DataFrame, params: BeamParams) -> pd.DataFrame:
    pairs = spec_Q(params, 4)
    values = np.array(pairs).ravel()
    containment = 0.0 if np.all((values > 0) & (values < 1.0 / params.k)) else 1.0
    interlacing = 0.0 if np.all(np.diff(values) < 0) else 1.0
    rows = [
        ("Q-spectrum-in-band", containment, 0.0),
        ("Q-spectrum-interlaces", interlacing, 0.0),
    ]
    return append_rows(df, rows)
